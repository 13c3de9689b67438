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
 * @file Dense statevector simulator.
 *
 * Qubit 0 is the most significant bit of the amplitude index, so for two
 * qubits the basis order is |00>, |01>, |10>, |11> with the left label
 * belonging to qubit 0.
 */
#pragma once

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "expressibench/config.hpp"
#include "expressibench/rng.hpp"

namespace expressibench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

class StateVector {
  public:
    /// |0...0> on n qubits; 1 <= n <= kTol.max_qubits.
    static StateVector zero(std::size_t num_qubits) {
        check_qubits(num_qubits);
        std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
        amps[0] = 1.0;
        return StateVector(num_qubits, std::move(amps));
    }

    /// Computational basis state |index>.
    static StateVector basis(std::size_t num_qubits, std::size_t index) {
        check_qubits(num_qubits);
        std::size_t dim = std::size_t{1} << num_qubits;
        if (index >= dim) {
            throw IndexError("basis index " + std::to_string(index) + " out of range for " +
                             std::to_string(num_qubits) + " qubits");
        }
        std::vector<Complex> amps(dim, Complex{0.0, 0.0});
        amps[index] = 1.0;
        return StateVector(num_qubits, std::move(amps));
    }

    /// Takes ownership of amplitudes; length must be a power of two and the norm 1.
    static StateVector from_amplitudes(std::vector<Complex> amps) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < amps.size()) {
            ++n;
        }
        if (amps.size() < 2 || (std::size_t{1} << n) != amps.size()) {
            throw DimensionError("amplitude count " + std::to_string(amps.size()) +
                                 " is not a power of two >= 2");
        }
        check_qubits(n);
        StateVector s(n, std::move(amps));
        if (std::abs(s.norm_squared() - 1.0) > kTol.norm) {
            throw ValidationError("amplitudes are not normalized");
        }
        return s;
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto &a : amps_) {
            acc += std::norm(a);
        }
        return acc;
    }

    /// Multiplies every amplitude by exp(i*phi).
    StateVector with_global_phase(double phi) const {
        StateVector out = *this;
        Complex p = std::polar(1.0, phi);
        for (auto &a : out.amps_) {
            a *= p;
        }
        return out;
    }

    std::span<Complex> mutable_amplitudes() { return amps_; }

  private:
    StateVector(std::size_t n, std::vector<Complex> amps)
        : num_qubits_(n), amps_(std::move(amps)) {}

    static void check_qubits(std::size_t n) {
        if (n < 1 || n > kTol.max_qubits) {
            throw DimensionError("qubit count " + std::to_string(n) + " outside [1, " +
                                 std::to_string(kTol.max_qubits) + "]");
        }
    }

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

enum class GateKind { RY, H, CRY, CNOT, CZ };

inline const char *gate_name(GateKind k) {
    switch (k) {
    case GateKind::RY:
        return "RY";
    case GateKind::H:
        return "H";
    case GateKind::CRY:
        return "CRY";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CZ:
        return "CZ";
    }
    return "?";
}

struct Gate {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    double angle = 0.0;

    static Gate ry(std::size_t target, double theta) { return {GateKind::RY, target, {}, theta}; }
    static Gate h(std::size_t target) { return {GateKind::H, target, {}, 0.0}; }
    static Gate cry(std::size_t control, std::size_t target, double theta) {
        return {GateKind::CRY, target, control, theta};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, 0.0};
    }
    static Gate cz(std::size_t control, std::size_t target) {
        return {GateKind::CZ, target, control, 0.0};
    }

    bool is_controlled() const {
        return kind == GateKind::CRY || kind == GateKind::CNOT || kind == GateKind::CZ;
    }
    bool has_angle() const { return kind == GateKind::RY || kind == GateKind::CRY; }

    Gate inverse() const {
        Gate g = *this;
        if (has_angle()) {
            g.angle = -angle;
        }
        return g;
    }

    /// 2x2 block acting on the target (when the control, if any, is 1), row-major.
    std::array<double, 4> target_block() const {
        switch (kind) {
        case GateKind::RY:
        case GateKind::CRY: {
            double c = std::cos(angle / 2.0);
            double s = std::sin(angle / 2.0);
            return {c, -s, s, c};
        }
        case GateKind::H: {
            double r = std::numbers::sqrt2 / 2.0;
            return {r, r, r, -r};
        }
        case GateKind::CNOT:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::CZ:
            return {1.0, 0.0, 0.0, -1.0};
        }
        return {1.0, 0.0, 0.0, 1.0};
    }

    /// Full 2^n x 2^n matrix of the gate; used by tests and oracles only.
    Matrix full_matrix(std::size_t num_qubits) const;
};

namespace detail {

inline std::size_t qubit_mask(std::size_t num_qubits, std::size_t q) {
    return std::size_t{1} << (num_qubits - 1 - q);
}

inline void validate_gate(const Gate &g, std::size_t num_qubits) {
    if (g.target >= num_qubits) {
        throw IndexError("gate target " + std::to_string(g.target) + " out of range for " +
                         std::to_string(num_qubits) + " qubits");
    }
    if (g.is_controlled()) {
        if (!g.control) {
            throw ValidationError(std::string(gate_name(g.kind)) + " requires a control qubit");
        }
        if (*g.control >= num_qubits) {
            throw IndexError("gate control " + std::to_string(*g.control) +
                             " out of range for " + std::to_string(num_qubits) + " qubits");
        }
        if (*g.control == g.target) {
            throw IndexError("gate control equals target (" + std::to_string(g.target) + ")");
        }
    } else if (g.control) {
        throw ValidationError(std::string(gate_name(g.kind)) + " takes no control qubit");
    }
}

/// Applies a real 2x2 block to every amplitude pair differing in tmask,
/// restricted to indices where all bits of cmask are set.
inline void apply_real_block(std::span<Complex> amps, std::size_t tmask, std::size_t cmask,
                             const std::array<double, 4> &m) {
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & tmask) != 0 || (i & cmask) != cmask) {
            continue;
        }
        std::size_t j = i | tmask;
        Complex a = amps[i];
        Complex b = amps[j];
        amps[i] = m[0] * a + m[1] * b;
        amps[j] = m[2] * a + m[3] * b;
    }
}

}  // namespace detail

namespace detail {

/// Gate application without index checks; g must be valid for state.
inline void apply_gate_unchecked(StateVector &state, const Gate &g) {
    const std::size_t n = state.num_qubits();
    auto amps = state.mutable_amplitudes();
    const std::size_t tmask = detail::qubit_mask(n, g.target);
    const std::size_t cmask = g.control ? detail::qubit_mask(n, *g.control) : 0;
    switch (g.kind) {
    case GateKind::CNOT:
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & tmask) == 0 && (i & cmask) == cmask) {
                std::swap(amps[i], amps[i | tmask]);
            }
        }
        return;
    case GateKind::CZ:
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & tmask) == tmask && (i & cmask) == cmask) {
                amps[i] = -amps[i];
            }
        }
        return;
    default:
        apply_real_block(amps, tmask, cmask, g.target_block());
    }
}

}  // namespace detail

/// Applies g in place. Throws IndexError for out-of-range qubits.
inline void apply_gate_inplace(StateVector &state, const Gate &g) {
    detail::validate_gate(g, state.num_qubits());
    detail::apply_gate_unchecked(state, g);
}

inline StateVector apply_gate(StateVector state, const Gate &g) {
    apply_gate_inplace(state, g);
    return state;
}

inline Matrix Gate::full_matrix(std::size_t num_qubits) const {
    const std::size_t dim = std::size_t{1} << num_qubits;
    Matrix m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector e = apply_gate(StateVector::basis(num_qubits, col), *this);
        for (std::size_t row = 0; row < dim; ++row) {
            m(row, col) = e[row];
        }
    }
    return m;
}

inline Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("inner product of states with dimensions " +
                             std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
    Complex acc{0.0, 0.0};
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

/// |<a|b>|^2.
inline double fidelity(const StateVector &a, const StateVector &b) {
    double f = std::norm(inner_product(a, b));
    return f > 1.0 ? 1.0 : f;
}

/**
 * Hermitian observable. Either a dense matrix, the projector onto |0...0>,
 * or a product of Pauli Z on a subset of qubits. Tr[O], Tr[O^2] and the
 * Frobenius norm are computed once at construction.
 */
class Observable {
  public:
    struct ZeroProjector {};
    struct PauliZString {
        std::vector<std::size_t> qubits;
        std::size_t mask = 0;
    };
    using Representation = std::variant<Matrix, ZeroProjector, PauliZString>;

    static Observable zero_projector(std::size_t num_qubits) {
        std::size_t d = checked_dim(num_qubits);
        return Observable(num_qubits, d, ZeroProjector{}, 1.0, 1.0);
    }

    /// Product of Z on the listed qubits (identity elsewhere). Empty list is the identity.
    static Observable pauli_z(std::size_t num_qubits, std::vector<std::size_t> qubits) {
        std::size_t d = checked_dim(num_qubits);
        PauliZString z;
        for (std::size_t q : qubits) {
            if (q >= num_qubits) {
                throw IndexError("Pauli Z qubit " + std::to_string(q) + " out of range");
            }
            std::size_t m = detail::qubit_mask(num_qubits, q);
            if (z.mask & m) {
                throw ValidationError("duplicate qubit in Pauli Z string");
            }
            z.mask |= m;
        }
        z.qubits = std::move(qubits);
        double tr = z.mask == 0 ? static_cast<double>(d) : 0.0;
        return Observable(num_qubits, d, std::move(z), tr, static_cast<double>(d));
    }

    static Observable dense(Matrix m) {
        if (m.rows() != m.cols()) {
            throw DimensionError("observable matrix is not square");
        }
        std::size_t d = static_cast<std::size_t>(m.rows());
        std::size_t n = 0;
        while ((std::size_t{1} << n) < d) {
            ++n;
        }
        if ((std::size_t{1} << n) != d || n < 1) {
            throw DimensionError("observable dimension " + std::to_string(d) +
                                 " is not a power of two >= 2");
        }
        checked_dim(n);
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kTol.hermitian) {
            throw ValidationError("observable matrix is not Hermitian");
        }
        double tr = m.trace().real();
        double tr2 = (m * m).trace().real();
        return Observable(n, d, std::move(m), tr, tr2);
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return dim_; }
    double trace() const { return trace_; }
    double trace_of_square() const { return trace_sq_; }
    double frobenius_norm() const { return std::sqrt(trace_sq_); }
    const Representation &representation() const { return repr_; }

    Matrix dense_matrix() const {
        if (const auto *m = std::get_if<Matrix>(&repr_)) {
            return *m;
        }
        Matrix out = Matrix::Zero(dim_, dim_);
        if (std::holds_alternative<ZeroProjector>(repr_)) {
            out(0, 0) = 1.0;
            return out;
        }
        const auto &z = std::get<PauliZString>(repr_);
        for (std::size_t i = 0; i < dim_; ++i) {
            out(i, i) = (std::popcount(i & z.mask) % 2) ? -1.0 : 1.0;
        }
        return out;
    }

    /// <psi|O|psi>. Throws DimensionError on mismatch.
    double expectation(const StateVector &psi) const {
        if (psi.dim() != dim_) {
            throw DimensionError("state dimension " + std::to_string(psi.dim()) +
                                 " does not match observable dimension " + std::to_string(dim_));
        }
        auto a = psi.amplitudes();
        if (std::holds_alternative<ZeroProjector>(repr_)) {
            return std::norm(a[0]);
        }
        if (const auto *z = std::get_if<PauliZString>(&repr_)) {
            double acc = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                acc += (std::popcount(i & z->mask) % 2) ? -std::norm(a[i]) : std::norm(a[i]);
            }
            return acc;
        }
        const auto &m = std::get<Matrix>(repr_);
        Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
        Complex e = v.dot(m * v);  // conjugates the first argument
        if (std::abs(e.imag()) > kTol.imaginary * (1.0 + frobenius_norm())) {
            throw ValidationError("expectation value has imaginary residue " +
                                  std::to_string(e.imag()));
        }
        return e.real();
    }

  private:
    Observable(std::size_t n, std::size_t d, Representation r, double tr, double tr2)
        : num_qubits_(n), dim_(d), repr_(std::move(r)), trace_(tr), trace_sq_(tr2) {}

    static std::size_t checked_dim(std::size_t n) {
        if (n < 1 || n > kTol.max_qubits) {
            throw DimensionError("qubit count " + std::to_string(n) + " outside [1, " +
                                 std::to_string(kTol.max_qubits) + "]");
        }
        return std::size_t{1} << n;
    }

    std::size_t num_qubits_;
    std::size_t dim_;
    Representation repr_;
    double trace_;
    double trace_sq_;
};

inline double expectation(const StateVector &psi, const Observable &obs) {
    return obs.expectation(psi);
}

/// Haar-random pure state: d independent standard complex Gaussians, normalized.
inline StateVector haar_state(std::size_t num_qubits, RngStream &rng) {
    StateVector zero = StateVector::zero(num_qubits);  // validates the cap
    std::vector<Complex> amps(zero.dim());
    double norm2 = 0.0;
    for (auto &a : amps) {
        a = rng.complex_normal();
        norm2 += std::norm(a);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto &a : amps) {
        a *= inv;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

/**
 * Haar-random unitary of dimension d (2 <= d <= 64).
 *
 * QR-factorizes a complex Ginibre matrix and multiplies each column of Q by
 * the phase of the matching diagonal entry of R, which makes the
 * factorization unique and the result Haar distributed.
 */
inline Matrix haar_unitary(std::size_t d, RngStream &rng) {
    if (d < kTol.min_haar_dim || d > kTol.max_haar_dim) {
        throw DimensionError("Haar unitary dimension " + std::to_string(d) + " outside [" +
                             std::to_string(kTol.min_haar_dim) + ", " +
                             std::to_string(kTol.max_haar_dim) + "]");
    }
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix z(dd, dd);
    for (Eigen::Index c = 0; c < dd; ++c) {
        for (Eigen::Index r = 0; r < dd; ++r) {
            z(r, c) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix &packed = qr.matrixQR();
    for (Eigen::Index c = 0; c < dd; ++c) {
        Complex rii = packed(c, c);
        double mag = std::abs(rii);
        Complex phase = mag > 0.0 ? rii / mag : Complex{1.0, 0.0};
        q.col(c) *= phase;
    }
    return q;
}

/// Frobenius norm of W^dagger W - I.
inline double unitarity_residual(const Matrix &w) {
    return (w.adjoint() * w - Matrix::Identity(w.rows(), w.cols())).norm();
}

}  // namespace expressibench
