// Copyright 2026 The Expressibench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "expressibench/expressibench.hpp"

using namespace expressibench;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string to_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

const ResultRow *find_row(const std::vector<ResultRow> &rows, int model, std::size_t n,
                          std::size_t l) {
    for (const auto &r : rows) {
        if (r.model_id == model && r.n == n && r.L == l) return &r;
    }
    return nullptr;
}

// Shared state between criteria that read the same sweep or baseline.
struct Shared {
    std::vector<ResultRow> sweep;
    double sweep_secs = 0.0;
    FidelitySamples haar_fid;
    CostStats haar_cost;
    double haar_secs = 0.0;
};

Outcome lemma_suite() {
    auto rows = run_lemma_suite(LemmaSuiteConfig{});
    std::size_t fails = 0, l1 = 0, l2 = 0;
    double worst = 0.0;
    for (const auto &r : rows) {
        fails += !r.result.passes;
        (r.lemma == 1 ? l1 : l2) += 1;
        double z = r.result.std_err > 0 ? r.result.abs_error / r.result.std_err : 0.0;
        worst = std::max(worst, z);
    }
    return {fails == 0 && l1 == 60 && l2 == 40,
            fmt("%zu/%zu checks within 4 SE (lemma1 %zu, lemma2 %zu), worst %.2f SE",
                rows.size() - fails, rows.size(), l1, l2, worst)};
}

void haar_baseline(Shared &s) {
    auto start = std::chrono::steady_clock::now();
    RngStream rng(42, "acceptance/haar");
    RngStream fid_rng = rng.split("fidelity"), cost_rng = rng.split("cost");
    s.haar_fid = sample_fidelities(HaarSource(2), 100000, fid_rng);
    s.haar_cost = cost_stats(HaarSource(2), Observable::zero_projector(2), 100000, cost_rng);
    s.haar_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome haar_fixed_point(const Shared &s) {
    auto e1 = expr_norm(s.haar_fid, 1, 4);
    double dev = std::abs(s.haar_cost.mean - 0.25);
    bool ok = dev <= 3 * s.haar_cost.std_err_mean && e1.norm_value <= 0.02 && s.haar_secs < 30;
    return {ok, fmt("mean %.6f (|dev| %.2e, 3SE %.2e), expr_norm_t1 %.4f, baseline %.1f s",
                    s.haar_cost.mean, dev, 3 * s.haar_cost.std_err_mean, e1.norm_value,
                    s.haar_secs)};
}

Outcome haar_variance(const Shared &s) {
    const auto obs = Observable::zero_projector(2);
    auto e1 = expr_norm(s.haar_fid, 1, 4);
    auto e2 = expr_norm(s.haar_fid, 2, 4);
    auto r = theorem2_report(s.haar_cost, e1, e2, obs, 4);
    // Analytic Haar moments: E[C] = 1/d, E[C^2] = 2/(d(d+1)).
    const double d = 4.0;
    const double analytic = 2.0 / (d * (d + 1.0)) - 1.0 / (d * d);
    double var_dev = std::abs(r.var_emp - analytic);
    double bound_gap = std::abs(r.rhs - std::abs(r.beta));
    double gap_tol = r.tolerance - kTol.theorem_sigmas * s.haar_cost.std_err_variance;
    bool ok = std::abs(r.beta - 0.0375) < 1e-15 && std::abs(analytic - 0.0375) < 1e-15 &&
              var_dev <= 3 * s.haar_cost.std_err_variance && bound_gap <= gap_tol && r.holds;
    return {ok, fmt("var_emp %.6f (|dev| %.2e, 3SE %.2e), beta %.6f, var_bound_t2 %.6f "
                    "(gap %.2e, 3SE %.2e)",
                    r.var_emp, var_dev, 3 * s.haar_cost.std_err_variance, r.beta, r.rhs,
                    bound_gap, gap_tol)};
}

void default_sweep(Shared &s) {
    ExperimentConfig cfg;
    cfg.workers = 1;
    auto start = std::chrono::steady_clock::now();
    s.sweep = run_experiment(cfg);
    s.sweep_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome theorem1_grid(const Shared &s) {
    std::size_t ok = 0;
    double worst = 1e300;
    for (const auto &r : s.sweep) {
        ok += r.t1_holds;
        worst = std::min(worst, r.rhs_t1 + r.t1_tolerance - r.lhs_t1);
    }
    ExperimentConfig reduced;
    reduced.pairs_m = reduced.cost_samples = 1000;
    reduced.workers = 1;
    auto start = std::chrono::steady_clock::now();
    auto rows = run_experiment(reduced);
    double reduced_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t reduced_ok = 0;
    for (const auto &r : rows) reduced_ok += r.t1_holds;
    return {ok == 432 && s.sweep.size() == 432 && s.sweep_secs < 900 && reduced_ok == 432 &&
                reduced_secs < 180,
            fmt("%zu/%zu cells hold, min slack %.3e, sweep %.1f s on 1 worker; "
                "at 1000 pairs/samples %zu/432 hold in %.1f s",
                ok, s.sweep.size(), worst, s.sweep_secs, reduced_ok, reduced_secs)};
}

Outcome theorem2_grid(const Shared &s) {
    std::size_t ok = 0;
    double worst = 1e300;
    for (const auto &r : s.sweep) {
        ok += r.t2_holds;
        worst = std::min(worst, r.var_bound_t2 + r.t2_tolerance - r.var_emp);
    }
    return {ok == 432 && s.sweep.size() == 432,
            fmt("%zu/%zu cells hold, min slack %.3e", ok, s.sweep.size(), worst)};
}

Outcome oracle_equivalence() {
    const std::size_t m = 5000;
    std::size_t checks = 0, ok = 0;
    double worst = 0.0;
    std::string first_fail;
    for (int model = 1; model <= kNumModels; ++model) {
        for (std::size_t n : {2u, 3u}) {
            for (std::size_t l : {1u, 4u, 8u}) {
                auto spec = model_spec(model, n, l);
                RngStream rng(42, "acceptance/oracle/m" + std::to_string(model) + "/n" +
                                      std::to_string(n) + "/L" + std::to_string(l));
                auto [fs, states] = sample_fidelities_with_states(
                    CircuitSource(spec, StateVector::zero(n)), m, rng);
                for (int t : {1, 2}) {
                    auto est = expr_norm(fs, t, spec.dim());
                    double exact = exact_expr_norm(
                        exact_moment_operator(std::span<const StateVector>(states), t),
                        spec.dim(), t);
                    double diff = std::abs(exact * exact - est.norm_value * est.norm_value);
                    double tol = 1.0 / m + 5 * est.std_err;
                    ++checks;
                    if (diff <= tol) {
                        ++ok;
                    } else if (first_fail.empty()) {
                        first_fail = fmt(" first failure: model %d n %zu L %zu t %d", model,
                                         n, l, t);
                    }
                    worst = std::max(worst, diff / tol);
                }
            }
        }
    }
    return {ok == checks && checks == 144,
            fmt("%zu/%zu within 1/m + 5 SE, worst ratio %.3f%s", ok, checks, worst,
                first_fail.c_str())};
}

Outcome degenerate_values() {
    auto spec = model_spec(9, 2, 3);
    RngStream rng(42, "acceptance/degenerate");
    FixedCircuitSource src(spec, sample_params(spec, rng), StateVector::zero(2));
    auto fs = sample_fidelities(src, 1000, rng);
    double n1 = expr_norm(fs, 1, 4).norm_value;
    double n2 = expr_norm(fs, 2, 4).norm_value;
    double e1 = std::abs(n1 - std::sqrt(1.0 - 1.0 / 4.0));
    double e2 = std::abs(n2 - std::sqrt(1.0 - 2.0 / 20.0));
    return {e1 <= 1e-12 && e2 <= 1e-12,
            fmt("expr_norm_t1 %.12f (err %.1e), expr_norm_t2 %.12f (err %.1e)", n1, e1, n2,
                e2)};
}

Outcome growth_trend(const Shared &s) {
    std::size_t ok = 0;
    std::string failures;
    for (int model = 1; model <= kNumModels; ++model) {
        const auto *a = find_row(s.sweep, model, 4, 1);
        const auto *b = find_row(s.sweep, model, 4, 8);
        if (!a || !b) return {false, "missing n=4 rows"};
        if (b->expr_norm_t1 <= a->expr_norm_t1) {
            ++ok;
        } else {
            failures += fmt(" m%d(%.1e>%.1e)", model, b->expr_norm_t1, a->expr_norm_t1);
        }
    }
    return {ok == 12, fmt("%zu/12 models with norm_t1(L=8) <= norm_t1(L=1)%s%s", ok,
                          failures.empty() ? "" : "; violations:", failures.c_str())};
}

Outcome chebyshev() {
    ExperimentConfig cfg;
    cfg.models = {1, 3, 8};
    cfg.qubit_counts = {4};
    cfg.layers = {1, 4, 8};
    cfg.workers = 1;
    auto rows = run_experiment(cfg);
    std::size_t ok = 0;
    for (const auto &r : rows) ok += r.chebyshev_consistent();
    return {ok == rows.size() && rows.size() == 9,
            fmt("%zu/%zu cells consistent for delta in {0.1, 0.2, 0.5}", ok, rows.size())};
}

Outcome determinism(const Shared &s) {
    ExperimentConfig cfg;
    cfg.workers = 8;
    std::string eight = to_csv(run_experiment(cfg));
    std::string one = to_csv(s.sweep);
    ExperimentConfig small;
    small.models = {2, 7, 12};
    small.qubit_counts = {3, 4};
    small.layers = {1, 5};
    small.workers = 8;
    std::string r1 = to_csv(run_experiment(small));
    std::string r2 = to_csv(run_experiment(small));
    return {eight == one && r1 == r2,
            fmt("repeat run %s (%zu bytes); 1 vs 8 workers on the default grid %s "
                "(%zu bytes)",
                r1 == r2 ? "identical" : "DIFFERS", r1.size(),
                eight == one ? "identical" : "DIFFERS", one.size())};
}

}  // namespace

int main(int argc, char **argv) {
    // --expect-fail 2,3: criteria whose failure is documented; they still print FAIL
    // but do not set the exit status.
    std::vector<long long> expected_red;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--expect-fail" && i + 1 < argc) {
            expected_red = parse_index_list(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--expect-fail LIST]\n", argv[0]);
            return 2;
        }
    }
    Shared s;
    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "lemma suite", lemma_suite},
        {2, "Haar fixed point",
         [&] {
             haar_baseline(s);
             return haar_fixed_point(s);
         }},
        {3, "Haar variance tightness", [&] { return haar_variance(s); }},
        {4, "concentration bound on default grid",
         [&] {
             default_sweep(s);
             return theorem1_grid(s);
         }},
        {5, "variance bound on default grid", [&] { return theorem2_grid(s); }},
        {6, "oracle equivalence", oracle_equivalence},
        {7, "degenerate ensemble values", degenerate_values},
        {8, "expressivity growth with depth", [&] { return growth_trend(s); }},
        {9, "Chebyshev consistency", chebyshev},
        {10, "determinism", [&] { return determinism(s); }},
    };
    int failed = 0, unexpected = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool excused = std::find(expected_red.begin(), expected_red.end(), c.id) !=
                       expected_red.end();
        failed += !o.pass;
        unexpected += !o.pass && !excused;
        std::printf("criterion %2d %-4s %-38s %7.1f s  %s%s\n", c.id, o.pass ? "PASS" : "FAIL",
                    c.name, secs, o.detail.c_str(),
                    !o.pass && excused ? "  [expected failure, see README]" : "");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed, %d unexpected failure(s)\n",
                static_cast<int>(criteria.size()) - failed, criteria.size(), unexpected);
    return unexpected == 0 ? 0 : 1;
}
