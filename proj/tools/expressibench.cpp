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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "expressibench/expressibench.hpp"

using namespace expressibench;

namespace {

template <typename T>
std::vector<T> to_list(const std::string &text) {
    std::vector<T> out;
    for (long long v : parse_index_list(text)) {
        if (v < 0) {
            throw ValidationError("negative value in list '" + text + "'");
        }
        out.push_back(static_cast<T>(v));
    }
    return out;
}

struct RunArgs {
    std::string models = "1..12";
    std::string qubits = "4,5,6";
    std::string layers = "1..12";
    std::size_t pairs = 5000;
    std::size_t samples = 5000;
    std::string observable = "zero-projector";
    std::uint64_t seed = 42;
    std::string format = "csv";
    std::string out = "results.csv";
    bool timing = false;
    bool no_exact_t2 = false;
};

int cmd_run(const RunArgs &a) {
    ExperimentConfig cfg;
    cfg.models = to_list<int>(a.models);
    cfg.qubit_counts = to_list<std::size_t>(a.qubits);
    cfg.layers = to_list<std::size_t>(a.layers);
    cfg.pairs_m = a.pairs;
    cfg.cost_samples = a.samples;
    cfg.observable = parse_observable_kind(a.observable);
    cfg.seed = a.seed;
    cfg.record_timing = a.timing;
    cfg.t2_enabled = !a.no_exact_t2;
    ResultFormat format = parse_result_format(a.format);

    auto start = std::chrono::steady_clock::now();
    auto rows = run_experiment(cfg);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_results(rows, a.out, format);

    std::size_t t1_fail = 0, t2_fail = 0;
    for (const auto &r : rows) {
        t1_fail += !r.t1_holds;
        t2_fail += !r.t2_holds;
        if (!r.t1_holds || !r.t2_holds) {
            std::fprintf(stderr, "bound violated: model %d n %zu L %zu (t1 %s, t2 %s)\n",
                         r.model_id, r.n, r.L, r.t1_holds ? "ok" : "FAIL",
                         r.t2_holds ? "ok" : "FAIL");
        }
    }
    std::printf("%zu cells in %.1f s -> %s\n", rows.size(), secs, a.out.c_str());
    std::printf("concentration bound holds: %zu/%zu\n", rows.size() - t1_fail, rows.size());
    std::printf("variance bound holds:      %zu/%zu\n", rows.size() - t2_fail, rows.size());
    return (t1_fail == 0 && t2_fail == 0) ? 0 : 1;
}

struct ValidateArgs {
    std::string dims = "2,4,8";
    std::string lemma2_dims = "2,4";
    std::size_t cases = 20;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
};

int cmd_validate(const ValidateArgs &a) {
    LemmaSuiteConfig cfg;
    cfg.lemma1_dims = to_list<std::size_t>(a.dims);
    cfg.lemma2_dims = to_list<std::size_t>(a.lemma2_dims);
    cfg.cases = a.cases;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    auto rows = run_lemma_suite(cfg);
    std::size_t failures = 0;
    std::printf("%-6s %3s %4s %24s %24s %11s %11s %s\n", "lemma", "d", "case", "estimate",
                "closed form", "|error|", "std err", "result");
    for (const auto &r : rows) {
        const auto &c = r.result;
        failures += !c.passes;
        std::printf("%-6d %3zu %4zu %11.6f%+11.6fi %11.6f%+11.6fi %11.3e %11.3e %s\n", r.lemma,
                    r.dim, r.index, c.estimate.real(), c.estimate.imag(), c.closed_form.real(),
                    c.closed_form.imag(), c.abs_error, c.std_err, c.passes ? "pass" : "FAIL");
    }
    std::printf("%zu/%zu lemma checks passed\n", rows.size() - failures, rows.size());
    return failures == 0 ? 0 : 1;
}

struct OracleArgs {
    int model = 1;
    std::size_t qubits = 2;
    std::size_t layers = 1;
    int t = 2;
    std::size_t pairs = 5000;
    std::uint64_t seed = 42;
};

int cmd_oracle(const OracleArgs &a) {
    CircuitSpec spec = model_spec(a.model, a.qubits, a.layers);
    const std::size_t d = spec.dim();
    RngStream rng(a.seed, "oracle");
    auto [samples, states] = sample_fidelities_with_states(
        CircuitSource(spec, StateVector::zero(a.qubits)), a.pairs, rng);
    ExprEstimate sampled = expr_norm(samples, a.t, d);
    double exact = exact_expr_norm(exact_moment_operator(std::span<const StateVector>(states), a.t),
                                   d, a.t);
    double diff = std::abs(exact * exact - sampled.norm_value * sampled.norm_value);
    double tol = 1.0 / static_cast<double>(a.pairs) + 5.0 * sampled.std_err;
    std::printf("model %d  n %zu  L %zu  t %d  pairs %zu\n", a.model, a.qubits, a.layers, a.t,
                a.pairs);
    std::printf("sampled norm   %.10f (frame potential %.10f +- %.2e%s)\n", sampled.norm_value,
                sampled.frame_potential, sampled.std_err, sampled.clamped ? ", clamped" : "");
    std::printf("exact norm     %.10f (moment operator over %zu states)\n", exact,
                states.size());
    std::printf("|exact^2 - sampled^2| = %.3e  (tolerance %.3e)  %s\n", diff, tol,
                diff <= tol ? "agree" : "DISAGREE");
    return diff <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Expressivity and cost-concentration benchmarks for layered RY circuits"};
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Sweep models x qubits x layers and write results");
    run_cmd->add_option("--models", run.models, "Model ids, e.g. 1..12 or 1,3,8");
    run_cmd->add_option("--qubits", run.qubits, "Qubit counts, e.g. 4,5,6");
    run_cmd->add_option("--layers", run.layers, "Layer counts, e.g. 1..12");
    run_cmd->add_option("--pairs", run.pairs, "Fidelity pairs per cell");
    run_cmd->add_option("--samples", run.samples, "Cost samples per cell");
    run_cmd->add_option("--observable", run.observable,
                        "zero-projector | pauli-z | z0 | identity");
    run_cmd->add_option("--seed", run.seed, "Base seed");
    run_cmd->add_option("--format", run.format, "csv | json");
    run_cmd->add_option("--out", run.out, "Output path");
    run_cmd->add_flag("--timing", run.timing, "Record per-cell wall time (not reproducible)");
    run_cmd->add_flag("--no-exact-t2", run.no_exact_t2,
                      "Skip the exact t=2 moment oracle on small cells");

    ValidateArgs val;
    auto *val_cmd = app.add_subcommand("validate", "Monte Carlo check of the Haar moment lemmas");
    val_cmd->add_option("--dims", val.dims, "Dimensions for the first-moment lemma");
    val_cmd->add_option("--lemma2-dims", val.lemma2_dims,
                        "Dimensions for the second-moment lemma");
    val_cmd->add_option("--cases", val.cases, "Random Hermitian cases per dimension");
    val_cmd->add_option("--samples", val.samples, "Haar unitaries per case");
    val_cmd->add_option("--seed", val.seed, "Base seed");

    OracleArgs orc;
    auto *orc_cmd =
        app.add_subcommand("oracle", "Compare sampled and exact expressivity norms on one cell");
    orc_cmd->add_option("--model", orc.model, "Model id 1..12")->required();
    orc_cmd->add_option("--qubits", orc.qubits, "Qubit count (d^t <= 64)")->required();
    orc_cmd->add_option("--layers", orc.layers, "Layer count")->required();
    orc_cmd->add_option("--t", orc.t, "Moment order 1 or 2");
    orc_cmd->add_option("--pairs", orc.pairs, "Fidelity pairs");
    orc_cmd->add_option("--seed", orc.seed, "Seed");

    int spec_model = 1;
    std::size_t spec_qubits = 4, spec_layers = 1;
    auto *spec_cmd = app.add_subcommand("spec", "Print a model's expanded gate list as JSON");
    spec_cmd->add_option("--model", spec_model, "Model id 1..12")->required();
    spec_cmd->add_option("--qubits", spec_qubits, "Qubit count")->required();
    spec_cmd->add_option("--layers", spec_layers, "Layer count")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run);
        if (*val_cmd) return cmd_validate(val);
        if (*orc_cmd) return cmd_oracle(orc);
        if (*spec_cmd) {
            std::cout << to_json(model_spec(spec_model, spec_qubits, spec_layers)).dump(2)
                      << '\n';
            return 0;
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
