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
 * @file The twelve layered RY ansatz models.
 *
 * Every layer is: Hadamard on all qubits (selected models only), RY on
 * every qubit, then an entangler over nearest-neighbour pairs. The model
 * table below is a reconstruction: only the Hadamard models {3,4,6,9,10,12}
 * and the CRY models {2,3,8,9} are pinned by the source description; the
 * remaining entangler choices complete the table with CNOT and CZ chains
 * and rings.
 *
 *   model  hadamard  entangler
 *     1       no     CNOT chain
 *     2       no     CRY chain
 *     3      yes     CRY chain
 *     4      yes     CNOT chain
 *     5       no     CZ chain
 *     6      yes     CZ chain
 *     7       no     CNOT ring
 *     8       no     CRY ring
 *     9      yes     CRY ring
 *    10      yes     CNOT ring
 *    11       no     CZ ring
 *    12      yes     CZ ring
 *
 * Model 0 is a control model with RY layers only.
 */
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expressibench/config.hpp"
#include "expressibench/rng.hpp"
#include "expressibench/statevec.hpp"
#include "json.hpp"

namespace expressibench {

enum class EntanglerKind { None, CnotChain, CnotRing, CzChain, CzRing, CryChain, CryRing };

inline const char *entangler_name(EntanglerKind k) {
    switch (k) {
    case EntanglerKind::None:
        return "none";
    case EntanglerKind::CnotChain:
        return "cnot_chain";
    case EntanglerKind::CnotRing:
        return "cnot_ring";
    case EntanglerKind::CzChain:
        return "cz_chain";
    case EntanglerKind::CzRing:
        return "cz_ring";
    case EntanglerKind::CryChain:
        return "cry_chain";
    case EntanglerKind::CryRing:
        return "cry_ring";
    }
    return "?";
}

inline bool is_ring(EntanglerKind k) {
    return k == EntanglerKind::CnotRing || k == EntanglerKind::CzRing ||
           k == EntanglerKind::CryRing;
}

inline bool is_cry(EntanglerKind k) {
    return k == EntanglerKind::CryChain || k == EntanglerKind::CryRing;
}

/// (control, target) pairs: (i, i+1) for i < n-1, plus (n-1, 0) for rings.
inline std::vector<std::pair<std::size_t, std::size_t>> entangler_pairs(EntanglerKind k,
                                                                       std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (k == EntanglerKind::None) {
        return out;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.emplace_back(i, i + 1);
    }
    if (is_ring(k)) {
        out.emplace_back(n - 1, 0);
    }
    return out;
}

inline std::size_t entangler_angle_count(EntanglerKind k, std::size_t n) {
    return is_cry(k) ? entangler_pairs(k, n).size() : 0;
}

struct LayerSpec {
    bool pre_hadamard = false;
    EntanglerKind entangler = EntanglerKind::None;

    bool operator==(const LayerSpec &) const = default;
};

struct CircuitSpec {
    int model_id = 0;
    std::size_t num_qubits = 0;
    std::size_t num_layers = 0;
    std::vector<LayerSpec> layers;

    std::size_t dim() const { return std::size_t{1} << num_qubits; }
};

/// Trainable angles, layer-major; within a layer the RY angles come first,
/// then the CRY entangler angles.
struct ParamVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

inline constexpr int kNumModels = 12;

inline LayerSpec model_layer(int model_id) {
    static constexpr std::array<LayerSpec, kNumModels + 1> table{{
        {false, EntanglerKind::None},
        {false, EntanglerKind::CnotChain},
        {false, EntanglerKind::CryChain},
        {true, EntanglerKind::CryChain},
        {true, EntanglerKind::CnotChain},
        {false, EntanglerKind::CzChain},
        {true, EntanglerKind::CzChain},
        {false, EntanglerKind::CnotRing},
        {false, EntanglerKind::CryRing},
        {true, EntanglerKind::CryRing},
        {true, EntanglerKind::CnotRing},
        {false, EntanglerKind::CzRing},
        {true, EntanglerKind::CzRing},
    }};
    if (model_id < 0 || model_id > kNumModels) {
        throw ValidationError("model id " + std::to_string(model_id) + " outside [0, 12]");
    }
    return table[static_cast<std::size_t>(model_id)];
}

namespace detail {

inline CircuitSpec build_spec(int model_id, std::size_t n, std::size_t num_layers) {
    if (n < 2) {
        throw ValidationError("models need at least 2 qubits, got " + std::to_string(n));
    }
    if (n > kTol.max_qubits) {
        throw DimensionError("qubit count " + std::to_string(n) + " exceeds cap " +
                             std::to_string(kTol.max_qubits));
    }
    if (num_layers < 1) {
        throw ValidationError("layer count must be >= 1");
    }
    CircuitSpec spec;
    spec.model_id = model_id;
    spec.num_qubits = n;
    spec.num_layers = num_layers;
    spec.layers.assign(num_layers, model_layer(model_id));
    return spec;
}

}  // namespace detail

/// Spec for models 1..12 on n >= 2 qubits with L >= 1 identical layers.
inline CircuitSpec model_spec(int model_id, std::size_t n, std::size_t num_layers) {
    if (model_id < 1 || model_id > kNumModels) {
        throw ValidationError("model id " + std::to_string(model_id) + " outside [1, 12]");
    }
    return detail::build_spec(model_id, n, num_layers);
}

/// RY-only layers without entanglers (model 0).
inline CircuitSpec control_spec(std::size_t n, std::size_t num_layers) {
    return detail::build_spec(0, n, num_layers);
}

inline std::size_t layer_param_count(const LayerSpec &layer, std::size_t n) {
    return n + entangler_angle_count(layer.entangler, n);
}

inline std::size_t param_count(const CircuitSpec &spec) {
    std::size_t total = 0;
    for (const auto &layer : spec.layers) {
        total += layer_param_count(layer, spec.num_qubits);
    }
    return total;
}

/// Independent uniform angles on [0, 2*pi).
inline ParamVector sample_params(const CircuitSpec &spec, RngStream &rng) {
    ParamVector p;
    p.values.resize(param_count(spec));
    for (auto &v : p.values) {
        v = rng.angle();
    }
    return p;
}

/// One gate of the expanded program; param_index is -1 for fixed gates.
struct GateSlot {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    long param_index = -1;
};

/// Gate program of spec in execution order: per layer H (if any), RY, entangler.
inline std::vector<GateSlot> gate_layout(const CircuitSpec &spec) {
    std::vector<GateSlot> out;
    const std::size_t n = spec.num_qubits;
    long p = 0;
    for (const auto &layer : spec.layers) {
        if (layer.pre_hadamard) {
            for (std::size_t q = 0; q < n; ++q) {
                out.push_back({GateKind::H, q, {}, -1});
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            out.push_back({GateKind::RY, q, {}, p++});
        }
        for (auto [c, t] : entangler_pairs(layer.entangler, n)) {
            switch (layer.entangler) {
            case EntanglerKind::CnotChain:
            case EntanglerKind::CnotRing:
                out.push_back({GateKind::CNOT, t, c, -1});
                break;
            case EntanglerKind::CzChain:
            case EntanglerKind::CzRing:
                out.push_back({GateKind::CZ, t, c, -1});
                break;
            default:
                out.push_back({GateKind::CRY, t, c, p++});
            }
        }
    }
    return out;
}

/// Binds params into concrete gates.
inline std::vector<Gate> expand_gates(const CircuitSpec &spec, const ParamVector &params) {
    if (params.size() != param_count(spec)) {
        throw ValidationError("parameter vector has " + std::to_string(params.size()) +
                              " entries, spec needs " + std::to_string(param_count(spec)));
    }
    std::vector<Gate> out;
    for (const auto &s : gate_layout(spec)) {
        double angle = s.param_index >= 0 ? params.values[static_cast<std::size_t>(s.param_index)]
                                          : 0.0;
        out.push_back({s.kind, s.target, s.control, angle});
    }
    return out;
}

/// Spec with its gate layout resolved once, for repeated execution.
class CompiledCircuit {
  public:
    explicit CompiledCircuit(CircuitSpec spec)
        : spec_(std::move(spec)), layout_(gate_layout(spec_)), num_params_(param_count(spec_)) {
        for (const auto &s : layout_) {
            detail::validate_gate({s.kind, s.target, s.control, 0.0}, spec_.num_qubits);
        }
    }

    const CircuitSpec &spec() const { return spec_; }
    std::size_t num_params() const { return num_params_; }

    /// U(theta)|initial>.
    StateVector run(const ParamVector &params, StateVector initial) const {
        if (params.size() != num_params_) {
            throw ValidationError("parameter vector has " + std::to_string(params.size()) +
                                  " entries, spec needs " + std::to_string(num_params_));
        }
        if (initial.num_qubits() != spec_.num_qubits) {
            throw ValidationError("initial state has " + std::to_string(initial.num_qubits()) +
                                  " qubits, spec has " + std::to_string(spec_.num_qubits));
        }
        for (const auto &s : layout_) {
            double angle =
                s.param_index >= 0 ? params.values[static_cast<std::size_t>(s.param_index)] : 0.0;
            detail::apply_gate_unchecked(initial, {s.kind, s.target, s.control, angle});
        }
        return initial;
    }

  private:
    CircuitSpec spec_;
    std::vector<GateSlot> layout_;
    std::size_t num_params_;
};

/// U(theta)|initial>.
inline StateVector run_circuit(const CircuitSpec &spec, const ParamVector &params,
                               StateVector initial) {
    return CompiledCircuit(spec).run(params, std::move(initial));
}

inline nlohmann::json to_json(const CircuitSpec &spec) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &s : gate_layout(spec)) {
        nlohmann::json g{{"kind", gate_name(s.kind)}, {"target", s.target}};
        if (s.control) {
            g["control"] = *s.control;
        }
        if (s.param_index >= 0) {
            g["param_index"] = s.param_index;
        }
        gates.push_back(std::move(g));
    }
    const LayerSpec &layer = spec.layers.front();
    return nlohmann::json{{"model_id", spec.model_id},
                          {"num_qubits", spec.num_qubits},
                          {"num_layers", spec.num_layers},
                          {"pre_hadamard", layer.pre_hadamard},
                          {"entangler", entangler_name(layer.entangler)},
                          {"param_count", param_count(spec)},
                          {"gates", std::move(gates)}};
}

/// Rebuilds a spec from its JSON form; the gate list must match the model.
inline CircuitSpec spec_from_json(const nlohmann::json &j) {
    int model_id = j.at("model_id").get<int>();
    auto n = j.at("num_qubits").get<std::size_t>();
    auto num_layers = j.at("num_layers").get<std::size_t>();
    CircuitSpec spec = model_id == 0 ? control_spec(n, num_layers)
                                     : model_spec(model_id, n, num_layers);
    if (j.contains("gates") && j.at("gates") != to_json(spec).at("gates")) {
        throw ValidationError("gate list does not match model " + std::to_string(model_id));
    }
    return spec;
}

}  // namespace expressibench
