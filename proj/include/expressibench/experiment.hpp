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

/**
 * @file Sweep orchestration over (model, qubits, layers) cells and result
 * persistence.
 *
 * Every cell draws from its own stream keyed by (seed, model, n, L), so a
 * cell's row does not depend on which worker ran it or in what order.
 */
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "expressibench/bounds.hpp"
#include "expressibench/circuit_zoo.hpp"
#include "expressibench/config.hpp"
#include "expressibench/expressivity.hpp"
#include "expressibench/rng.hpp"
#include "expressibench/statevec.hpp"
#include "json.hpp"

namespace expressibench {

inline constexpr int kResultSchemaVersion = 1;
inline constexpr std::array<double, 3> kDeviationDeltas{0.1, 0.2, 0.5};

enum class ObservableKind { ZeroProjector, PauliZAll, PauliZ0, Identity };

inline ObservableKind parse_observable_kind(std::string_view s) {
    if (s == "zero-projector") return ObservableKind::ZeroProjector;
    if (s == "pauli-z") return ObservableKind::PauliZAll;
    if (s == "z0") return ObservableKind::PauliZ0;
    if (s == "identity") return ObservableKind::Identity;
    throw ValidationError("unknown observable '" + std::string(s) +
                          "' (expected zero-projector, pauli-z, z0, identity)");
}

inline const char *observable_kind_name(ObservableKind k) {
    switch (k) {
    case ObservableKind::ZeroProjector:
        return "zero-projector";
    case ObservableKind::PauliZAll:
        return "pauli-z";
    case ObservableKind::PauliZ0:
        return "z0";
    case ObservableKind::Identity:
        return "identity";
    }
    return "?";
}

inline Observable make_observable(ObservableKind k, std::size_t n) {
    switch (k) {
    case ObservableKind::ZeroProjector:
        return Observable::zero_projector(n);
    case ObservableKind::PauliZAll: {
        std::vector<std::size_t> qs(n);
        for (std::size_t q = 0; q < n; ++q) qs[q] = q;
        return Observable::pauli_z(n, qs);
    }
    case ObservableKind::PauliZ0:
        return Observable::pauli_z(n, {0});
    case ObservableKind::Identity:
        return Observable::pauli_z(n, {});
    }
    throw ValidationError("unknown observable kind");
}

/// Parses "1..12", "4,5,6" or mixtures such as "1..3,8" into a sorted, de-duplicated list.
inline std::vector<long long> parse_index_list(std::string_view text) {
    std::vector<long long> out;
    auto parse_one = [&](std::string_view tok) {
        std::string t(tok);
        char *end = nullptr;
        long long v = std::strtoll(t.c_str(), &end, 10);
        if (t.empty() || end != t.c_str() + t.size()) {
            throw ValidationError("bad integer '" + t + "' in list '" + std::string(text) + "'");
        }
        return v;
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view item =
            text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        std::size_t dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(parse_one(item));
        } else {
            long long lo = parse_one(item.substr(0, dots));
            long long hi = parse_one(item.substr(dots + 2));
            if (hi < lo) {
                throw ValidationError("empty range '" + std::string(item) + "'");
            }
            for (long long v = lo; v <= hi; ++v) {
                out.push_back(v);
            }
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct ExperimentConfig {
    std::vector<int> models{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<std::size_t> qubit_counts{4, 5, 6};
    std::vector<std::size_t> layers{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::size_t pairs_m = 5000;
    std::size_t cost_samples = 5000;
    // Exact t=2 moment oracle on the sampled states, only where d^2 <= 64.
    bool t2_enabled = true;
    ObservableKind observable = ObservableKind::ZeroProjector;
    std::uint64_t seed = 42;
    // Timing is off by default so output files are byte-reproducible.
    bool record_timing = false;
    std::optional<std::size_t> workers;

    void validate() const {
        if (pairs_m < 2) {
            throw ValidationError("pairs must be >= 2, got " + std::to_string(pairs_m));
        }
        if (cost_samples < 2) {
            throw ValidationError("cost samples must be >= 2, got " +
                                  std::to_string(cost_samples));
        }
        if (models.empty() || qubit_counts.empty() || layers.empty()) {
            throw ValidationError("empty model, qubit or layer list");
        }
        for (int m : models) {
            if (m < 1 || m > kNumModels) {
                throw ValidationError("model id " + std::to_string(m) + " outside [1, 12]");
            }
        }
        for (std::size_t n : qubit_counts) {
            if (n < 2 || n > kTol.max_qubits) {
                throw ValidationError("qubit count " + std::to_string(n) + " outside [2, " +
                                      std::to_string(kTol.max_qubits) + "]");
            }
        }
        for (std::size_t l : layers) {
            if (l < 1) {
                throw ValidationError("layer count must be >= 1");
            }
        }
        if (workers && *workers == 0) {
            throw ValidationError("worker count must be >= 1");
        }
    }
};

struct ResultRow {
    int schema_version = kResultSchemaVersion;
    int model_id = 0;
    std::size_t n = 0;
    std::size_t L = 0;
    double frame_potential_t1 = 0.0;
    double frame_potential_t2 = 0.0;
    double expr_norm_t1 = 0.0;
    double expr_norm_t2 = 0.0;
    std::optional<double> expr_norm_t2_exact;
    double mean_cost = 0.0;
    double lhs_t1 = 0.0;
    double rhs_t1 = 0.0;
    double t1_tolerance = 0.0;
    bool t1_holds = false;
    double var_emp = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    double var_bound_t2 = 0.0;
    double t2_tolerance = 0.0;
    bool t2_holds = false;
    std::array<double, 3> cheb_bound{};
    std::array<double, 3> emp_dev_prob{};
    std::array<double, 3> emp_dev_std_err{};
    bool clamped_t1 = false;
    bool clamped_t2 = false;
    double se_frame_t1 = 0.0;
    double se_frame_t2 = 0.0;
    double se_norm_t1 = 0.0;
    double se_norm_t2 = 0.0;
    double se_mean_cost = 0.0;
    double se_var = 0.0;
    double wall_time_ms = 0.0;

    bool operator==(const ResultRow &) const = default;

    /// empirical deviation <= Chebyshev bound + 3 binomial SE, for every delta.
    bool chebyshev_consistent() const {
        for (std::size_t i = 0; i < kDeviationDeltas.size(); ++i) {
            if (emp_dev_prob[i] > cheb_bound[i] + kTol.theorem_sigmas * emp_dev_std_err[i]) {
                return false;
            }
        }
        return true;
    }
};

/// Evaluates one (model, n, L) cell.
inline ResultRow run_cell(const ExperimentConfig &cfg, int model_id, std::size_t n,
                          std::size_t num_layers) {
    auto start = std::chrono::steady_clock::now();
    const CircuitSpec spec = model_spec(model_id, n, num_layers);
    const std::size_t d = spec.dim();
    const Observable obs = make_observable(cfg.observable, n);
    const StateVector initial = StateVector::zero(n);
    const CircuitSource source(spec, initial);

    RngStream cell(cfg.seed, "cell/m" + std::to_string(model_id) + "/n" + std::to_string(n) +
                                 "/L" + std::to_string(num_layers));
    RngStream fid_rng = cell.split("fidelity");
    RngStream cost_rng = cell.split("cost");

    ResultRow row;
    row.model_id = model_id;
    row.n = n;
    row.L = num_layers;

    FidelitySamples fid;
    if (cfg.t2_enabled && d * d <= kTol.max_oracle_dim) {
        auto [samples, states] = sample_fidelities_with_states(source, cfg.pairs_m, fid_rng);
        fid = samples;
        row.expr_norm_t2_exact =
            exact_expr_norm(exact_moment_operator(std::span<const StateVector>(states), 2), d, 2);
    } else {
        fid = sample_fidelities(source, cfg.pairs_m, fid_rng);
    }
    const ExprEstimate e1 = expr_norm(fid, 1, d);
    const ExprEstimate e2 = expr_norm(fid, 2, d);
    const CostStats stats = cost_stats(source, obs, cfg.cost_samples, cost_rng);
    const TheoremOneReport t1 = theorem1_report(stats, e1, obs, d);
    const TheoremTwoReport t2 = theorem2_report(stats, e1, e2, obs, d);

    row.frame_potential_t1 = e1.frame_potential;
    row.frame_potential_t2 = e2.frame_potential;
    row.expr_norm_t1 = e1.norm_value;
    row.expr_norm_t2 = e2.norm_value;
    row.mean_cost = stats.mean;
    row.lhs_t1 = t1.lhs;
    row.rhs_t1 = t1.rhs;
    row.t1_tolerance = t1.tolerance;
    row.t1_holds = t1.holds;
    row.var_emp = t2.var_emp;
    row.beta = t2.beta;
    row.alpha = t2.alpha;
    row.var_bound_t2 = t2.rhs;
    row.t2_tolerance = t2.tolerance;
    row.t2_holds = t2.holds;
    for (std::size_t i = 0; i < kDeviationDeltas.size(); ++i) {
        row.cheb_bound[i] = chebyshev_bound(stats.variance, kDeviationDeltas[i]);
        row.emp_dev_prob[i] = empirical_deviation_prob(stats, kDeviationDeltas[i]);
        row.emp_dev_std_err[i] = binomial_std_err(row.emp_dev_prob[i], stats.count);
    }
    row.clamped_t1 = e1.clamped;
    row.clamped_t2 = e2.clamped;
    row.se_frame_t1 = e1.std_err;
    row.se_frame_t2 = e2.std_err;
    row.se_norm_t1 = e1.norm_std_err;
    row.se_norm_t2 = e2.norm_std_err;
    row.se_mean_cost = stats.std_err_mean;
    row.se_var = stats.std_err_variance;
    if (cfg.record_timing) {
        row.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    }
    return row;
}

/// EXPRESSIBENCH_WORKERS if set, else the hardware thread count.
inline std::size_t default_worker_count() {
    if (const char *env = std::getenv("EXPRESSIBENCH_WORKERS")) {
        char *end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
        throw ValidationError(std::string("invalid EXPRESSIBENCH_WORKERS value '") + env + "'");
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct CellError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One row per grid cell, sorted by (model, n, L).
inline std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    struct Cell {
        int model;
        std::size_t n;
        std::size_t L;
    };
    std::vector<int> models = cfg.models;
    std::vector<std::size_t> qubits = cfg.qubit_counts;
    std::sort(models.begin(), models.end());
    models.erase(std::unique(models.begin(), models.end()), models.end());
    std::sort(qubits.begin(), qubits.end());
    qubits.erase(std::unique(qubits.begin(), qubits.end()), qubits.end());
    std::vector<std::size_t> layers = cfg.layers;
    std::sort(layers.begin(), layers.end());
    layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
    std::vector<Cell> cells;
    for (int m : models) {
        for (std::size_t n : qubits) {
            for (std::size_t l : layers) {
                cells.push_back({m, n, l});
            }
        }
    }

    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    std::string first_error;
    auto worker = [&] {
        while (!failed.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            const Cell &c = cells[i];
            try {
                rows[i] = run_cell(cfg, c.model, c.n, c.L);
            } catch (const std::exception &e) {
                std::lock_guard lock(err_mu);
                if (!failed.exchange(true)) {
                    first_error = "cell (model " + std::to_string(c.model) + ", n " +
                                  std::to_string(c.n) + ", L " + std::to_string(c.L) +
                                  "): " + e.what();
                }
            }
        }
    };
    std::size_t nworkers = std::min(cfg.workers.value_or(default_worker_count()), cells.size());
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nworkers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failed) {
        throw CellError(first_error);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Persistence

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string delta_suffix(double delta) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", delta);
    return buf;
}

using FieldRef = std::variant<int ResultRow::*, std::size_t ResultRow::*, double ResultRow::*,
                              bool ResultRow::*, std::optional<double> ResultRow::*,
                              std::pair<std::array<double, 3> ResultRow::*, std::size_t>>;

struct Column {
    std::string name;
    FieldRef field;
};

inline const std::vector<Column> &result_columns() {
    static const std::vector<Column> cols = [] {
        std::vector<Column> c{
            {"schema_version", &ResultRow::schema_version},
            {"model_id", &ResultRow::model_id},
            {"n", &ResultRow::n},
            {"L", &ResultRow::L},
            {"frame_potential_t1", &ResultRow::frame_potential_t1},
            {"frame_potential_t2", &ResultRow::frame_potential_t2},
            {"expr_norm_t1", &ResultRow::expr_norm_t1},
            {"expr_norm_t2", &ResultRow::expr_norm_t2},
            {"expr_norm_t2_exact", &ResultRow::expr_norm_t2_exact},
            {"mean_cost", &ResultRow::mean_cost},
            {"lhs_t1", &ResultRow::lhs_t1},
            {"rhs_t1", &ResultRow::rhs_t1},
            {"t1_tolerance", &ResultRow::t1_tolerance},
            {"t1_holds", &ResultRow::t1_holds},
            {"var_emp", &ResultRow::var_emp},
            {"beta", &ResultRow::beta},
            {"alpha", &ResultRow::alpha},
            {"var_bound_t2", &ResultRow::var_bound_t2},
            {"t2_tolerance", &ResultRow::t2_tolerance},
            {"t2_holds", &ResultRow::t2_holds},
        };
        for (std::size_t i = 0; i < kDeviationDeltas.size(); ++i) {
            c.push_back({"cheb_bound_delta_" + delta_suffix(kDeviationDeltas[i]),
                         std::pair{&ResultRow::cheb_bound, i}});
        }
        for (std::size_t i = 0; i < kDeviationDeltas.size(); ++i) {
            c.push_back({"emp_dev_prob_" + delta_suffix(kDeviationDeltas[i]),
                         std::pair{&ResultRow::emp_dev_prob, i}});
        }
        for (std::size_t i = 0; i < kDeviationDeltas.size(); ++i) {
            c.push_back({"se_emp_dev_prob_" + delta_suffix(kDeviationDeltas[i]),
                         std::pair{&ResultRow::emp_dev_std_err, i}});
        }
        std::vector<Column> tail{
            {"clamped_t1", &ResultRow::clamped_t1},
            {"clamped_t2", &ResultRow::clamped_t2},
            {"se_frame_t1", &ResultRow::se_frame_t1},
            {"se_frame_t2", &ResultRow::se_frame_t2},
            {"se_norm_t1", &ResultRow::se_norm_t1},
            {"se_norm_t2", &ResultRow::se_norm_t2},
            {"se_mean_cost", &ResultRow::se_mean_cost},
            {"se_var", &ResultRow::se_var},
            {"wall_time_ms", &ResultRow::wall_time_ms},
        };
        c.insert(c.end(), tail.begin(), tail.end());
        return c;
    }();
    return cols;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline std::string field_to_text(const ResultRow &row, const FieldRef &f) {
    return std::visit(
        Overloaded{
            [&](int ResultRow::*p) { return std::to_string(row.*p); },
            [&](std::size_t ResultRow::*p) { return std::to_string(row.*p); },
            [&](double ResultRow::*p) { return format_double(row.*p); },
            [&](bool ResultRow::*p) { return std::string(row.*p ? "true" : "false"); },
            [&](std::optional<double> ResultRow::*p) {
                return (row.*p) ? format_double(*(row.*p)) : std::string();
            },
            [&](const std::pair<std::array<double, 3> ResultRow::*, std::size_t> &p) {
                return format_double((row.*(p.first))[p.second]);
            },
        },
        f);
}

inline nlohmann::json field_to_json(const ResultRow &row, const FieldRef &f) {
    return std::visit(
        Overloaded{
            [&](int ResultRow::*p) { return nlohmann::json(row.*p); },
            [&](std::size_t ResultRow::*p) { return nlohmann::json(row.*p); },
            [&](double ResultRow::*p) { return nlohmann::json(row.*p); },
            [&](bool ResultRow::*p) { return nlohmann::json(row.*p); },
            [&](std::optional<double> ResultRow::*p) {
                return (row.*p) ? nlohmann::json(*(row.*p)) : nlohmann::json(nullptr);
            },
            [&](const std::pair<std::array<double, 3> ResultRow::*, std::size_t> &p) {
                return nlohmann::json((row.*(p.first))[p.second]);
            },
        },
        f);
}

inline double parse_double(const std::string &s, const std::string &col) {
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ValidationError("column " + col + ": bad number '" + s + "'");
    }
    return v;
}

inline long long parse_int(const std::string &s, const std::string &col) {
    char *end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ValidationError("column " + col + ": bad integer '" + s + "'");
    }
    return v;
}

inline void field_from_text(ResultRow &row, const FieldRef &f, const std::string &text,
                            const std::string &col) {
    std::visit(Overloaded{
                   [&](int ResultRow::*p) { row.*p = static_cast<int>(parse_int(text, col)); },
                   [&](std::size_t ResultRow::*p) {
                       row.*p = static_cast<std::size_t>(parse_int(text, col));
                   },
                   [&](double ResultRow::*p) { row.*p = parse_double(text, col); },
                   [&](bool ResultRow::*p) {
                       if (text != "true" && text != "false") {
                           throw ValidationError("column " + col + ": bad boolean '" + text +
                                                 "'");
                       }
                       row.*p = text == "true";
                   },
                   [&](std::optional<double> ResultRow::*p) {
                       row.*p = text.empty() ? std::nullopt
                                             : std::optional<double>(parse_double(text, col));
                   },
                   [&](const std::pair<std::array<double, 3> ResultRow::*, std::size_t> &p) {
                       (row.*(p.first))[p.second] = parse_double(text, col);
                   },
               },
               f);
}

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

inline std::vector<std::string> result_column_names() {
    std::vector<std::string> names;
    for (const auto &c : detail::result_columns()) {
        names.push_back(c.name);
    }
    return names;
}

inline void write_csv(std::ostream &os, const std::vector<ResultRow> &rows) {
    const auto &cols = detail::result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i].name;
    }
    os << '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            os << (i ? "," : "") << detail::field_to_text(row, cols[i].field);
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json rows_to_json(const std::vector<ResultRow> &rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : rows) {
        nlohmann::ordered_json obj;
        for (const auto &c : detail::result_columns()) {
            obj[c.name] = detail::field_to_json(row, c.field);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

/// Parses a results CSV; columns are matched by header name, in any order.
inline std::vector<ResultRow> read_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ValidationError("empty results file");
    }
    auto header = detail::split_csv_line(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        index[header[i]] = i;
    }
    const auto &cols = detail::result_columns();
    for (const auto &c : cols) {
        if (!index.count(c.name)) {
            throw ValidationError("results file is missing column " + c.name);
        }
    }
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ValidationError("row " + std::to_string(rows.size() + 1) + " has " +
                                  std::to_string(cells.size()) + " fields, header has " +
                                  std::to_string(header.size()));
        }
        ResultRow row;
        for (const auto &c : cols) {
            detail::field_from_text(row, c.field, cells[index[c.name]], c.name);
        }
        if (row.schema_version != kResultSchemaVersion) {
            throw ValidationError("unsupported schema version " +
                                  std::to_string(row.schema_version));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

enum class ResultFormat { Csv, Json };

inline ResultFormat parse_result_format(std::string_view s) {
    if (s == "csv") return ResultFormat::Csv;
    if (s == "json") return ResultFormat::Json;
    throw ValidationError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

/// CSV with a fixed header, or a JSON array of objects. Floats use 17 digits.
inline void write_results(const std::vector<ResultRow> &rows, const std::string &path,
                          ResultFormat format) {
    if (rows.empty()) {
        throw ValidationError("no result rows to write");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    if (format == ResultFormat::Csv) {
        write_csv(out, rows);
    } else {
        // nlohmann emits the shortest round-trip representation of each double.
        out << rows_to_json(rows).dump(2) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write to " + path + " failed");
    }
}

inline std::vector<ResultRow> read_results(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_csv(in);
}

}  // namespace expressibench
