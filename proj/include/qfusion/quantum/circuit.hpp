// Copyright 2026 The qfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file circuit.hpp
 * The variational circuit used by every quantum branch:
 *
 *   |0⟩^Q  ->  RY(θ_j) on each wire, θ = π tanh(s ⊙ x)
 *          ->  L strongly entangling layers
 *              (Rot(φ,θ,ω) = RZ(φ), RY(θ), RZ(ω) per wire, then a CNOT ring
 *               i -> (i + r_l) mod Q with r_l = (l mod (Q-1)) + 1)
 *          ->  readout z = (⟨Z_0⟩..⟨Z_{Q-1}⟩, ⟨Z_0 Z_1⟩..⟨Z_{Q-1} Z_0⟩)
 *
 * Gradients use adjoint differentiation through the statevector. The
 * readout observables are all diagonal, so the weighted observable
 * Σ_k g_k O_k is applied as an elementwise product.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfusion/quantum/statevector.hpp"

namespace qfusion::quantum {

struct CircuitConfig {
    static constexpr std::size_t kMaxQubits = 12;

    std::size_t qubits = 9;
    std::size_t layers = 3;

    void validate() const {
        if (qubits < 2 || qubits > kMaxQubits) {
            throw ConfigError("circuit qubit count must lie in [2, " +
                              std::to_string(kMaxQubits) + "], got " + std::to_string(qubits));
        }
        if (layers < 1) {
            throw ConfigError("circuit needs at least one layer");
        }
    }

    [[nodiscard]] std::size_t readout_size() const { return 2 * qubits; }
    [[nodiscard]] std::size_t num_weights() const { return layers * qubits * 3; }
};

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Variational weights W (stored (L*Q) x 3, row l*Q + q holds φ, θ, ω) and
/// per-wire input scale s.
template <typename Real = double> struct QuantumParams {
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights;
    Vector<Real> scale;

    QuantumParams() = default;
    explicit QuantumParams(const CircuitConfig &config)
        : weights(decltype(weights)::Zero(static_cast<Eigen::Index>(config.layers * config.qubits), 3)),
          scale(Vector<Real>::Ones(static_cast<Eigen::Index>(config.qubits))) {}

    /// W ~ U(-bound, bound), s = 1.
    static QuantumParams initialized(const CircuitConfig &config, std::mt19937_64 &rng,
                                     double bound = 0.01) {
        QuantumParams p(config);
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < p.weights.size(); ++i) {
            p.weights.data()[i] = static_cast<Real>(dist(rng));
        }
        return p;
    }

    Real &weight(std::size_t layer, std::size_t wire, std::size_t k, std::size_t qubits) {
        return weights(static_cast<Eigen::Index>(layer * qubits + wire), static_cast<Eigen::Index>(k));
    }

    void check(const CircuitConfig &config) const {
        if (weights.rows() != static_cast<Eigen::Index>(config.layers * config.qubits) ||
            weights.cols() != 3 || scale.size() != static_cast<Eigen::Index>(config.qubits)) {
            throw DimensionError("QuantumParams: expected W " +
                                 std::to_string(config.layers) + "x" +
                                 std::to_string(config.qubits) + "x3 and s of length " +
                                 std::to_string(config.qubits));
        }
    }
};

template <typename Real = double> struct QnodeGradients {
    Vector<Real> inputs;                                                      // d/dx, length Q
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights; // (L*Q) x 3
    Vector<Real> scale;                                                       // d/ds, length Q
};

/// θ_j = π tanh(s_j x_j); every θ_j lies in (-π, π).
template <typename DerivedX, typename DerivedS>
auto encode_angles(const Eigen::MatrixBase<DerivedX> &x, const Eigen::MatrixBase<DerivedS> &s) {
    using Real = typename DerivedX::Scalar;
    if (x.size() != s.size()) {
        throw DimensionError("encode_angles: input length " + std::to_string(x.size()) +
                             " vs scale length " + std::to_string(s.size()));
    }
    Vector<Real> theta(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        theta(j) = std::numbers::pi_v<Real> * std::tanh(s(j) * x(j));
    }
    return theta;
}

/// CNOT offset of layer `layer` in the entangling ring.
inline std::size_t entangler_range(std::size_t layer, std::size_t qubits) {
    return (layer % (qubits - 1)) + 1;
}

enum class GateKind { kRY, kRZ, kCNOT };

/// One gate of the compiled circuit. `slot` indexes the differentiable angle:
/// encoding angles use 0..Q-1, weight (l, q, k) uses Q + 3 (l Q + q) + k.
template <typename Real> struct Gate {
    GateKind kind;
    std::size_t wire;
    std::size_t target;
    Real angle;
    int slot;
};

template <typename Real>
void apply_gate(StateVector<Real> &state, const Gate<Real> &gate, bool adjoint = false) {
    const Real angle = adjoint ? -gate.angle : gate.angle;
    switch (gate.kind) {
    case GateKind::kRY:
        state.apply_ry(gate.wire, angle);
        break;
    case GateKind::kRZ:
        state.apply_rz(gate.wire, angle);
        break;
    case GateKind::kCNOT:
        state.apply_cnot(gate.wire, gate.target);
        break;
    }
}

/// Gate list for the given encoding angles and weights.
template <typename Real, typename DerivedT, typename DerivedW>
std::vector<Gate<Real>> compile_circuit(const Eigen::MatrixBase<DerivedT> &theta,
                                        const Eigen::MatrixBase<DerivedW> &weights,
                                        const CircuitConfig &config) {
    const std::size_t q = config.qubits;
    std::vector<Gate<Real>> tape;
    tape.reserve(q + config.layers * q * 4);
    for (std::size_t j = 0; j < q; ++j) {
        tape.push_back({GateKind::kRY, j, 0, theta(static_cast<Eigen::Index>(j)),
                        static_cast<int>(j)});
    }
    for (std::size_t l = 0; l < config.layers; ++l) {
        for (std::size_t j = 0; j < q; ++j) {
            const auto row = static_cast<Eigen::Index>(l * q + j);
            const int base = static_cast<int>(q + 3 * (l * q + j));
            tape.push_back({GateKind::kRZ, j, 0, weights(row, 0), base});
            tape.push_back({GateKind::kRY, j, 0, weights(row, 1), base + 1});
            tape.push_back({GateKind::kRZ, j, 0, weights(row, 2), base + 2});
        }
        const std::size_t r = entangler_range(l, q);
        for (std::size_t j = 0; j < q; ++j) {
            tape.push_back({GateKind::kCNOT, j, (j + r) % q, Real(0), -1});
        }
    }
    return tape;
}

template <typename Real>
void apply_circuit(StateVector<Real> &state, const std::vector<Gate<Real>> &tape) {
    for (const auto &gate : tape) {
        apply_gate(state, gate);
    }
}

/// Apply L strongly entangling layers with weights W ((L*Q) x 3) to `state`.
template <typename Real, typename DerivedW>
void strongly_entangling_layers(StateVector<Real> &state, const Eigen::MatrixBase<DerivedW> &weights,
                                const CircuitConfig &config) {
    config.validate();
    if (state.num_qubits() != config.qubits ||
        weights.rows() != static_cast<Eigen::Index>(config.layers * config.qubits) ||
        weights.cols() != 3) {
        throw DimensionError("strongly_entangling_layers: weights/state do not match config");
    }
    const Vector<Real> no_encoding = Vector<Real>::Zero(static_cast<Eigen::Index>(config.qubits));
    auto tape = compile_circuit<Real>(no_encoding, weights, config);
    for (std::size_t i = config.qubits; i < tape.size(); ++i) {
        apply_gate(state, tape[i]);
    }
}

/// Eigenvalue (±1) of Z on `wire` for basis state `index`.
template <typename Real> inline Real z_sign(const StateVector<Real> &state, std::size_t index,
                                            std::size_t wire) {
    return (index & state.wire_mask(wire)) != 0 ? Real(-1) : Real(1);
}

/// (⟨Z_j⟩ for j < Q, then ⟨Z_j Z_{(j+1) mod Q}⟩ for j < Q).
template <typename Real> Vector<Real> readout(const StateVector<Real> &state) {
    const std::size_t q = state.num_qubits();
    Vector<Real> z = Vector<Real>::Zero(static_cast<Eigen::Index>(2 * q));
    std::vector<std::size_t> masks(q);
    for (std::size_t j = 0; j < q; ++j) {
        masks[j] = state.wire_mask(j);
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
        const Real p = std::norm(state[i]);
        if (p == Real(0)) {
            continue;
        }
        for (std::size_t j = 0; j < q; ++j) {
            const Real zj = (i & masks[j]) != 0 ? Real(-1) : Real(1);
            const Real zk = (i & masks[(j + 1) % q]) != 0 ? Real(-1) : Real(1);
            z(static_cast<Eigen::Index>(j)) += p * zj;
            z(static_cast<Eigen::Index>(q + j)) += p * zj * zk;
        }
    }
    return z;
}

template <typename Real, typename DerivedX>
StateVector<Real> prepare_state(const Eigen::MatrixBase<DerivedX> &x,
                                const QuantumParams<Real> &params, const CircuitConfig &config) {
    config.validate();
    params.check(config);
    if (x.size() != static_cast<Eigen::Index>(config.qubits)) {
        throw DimensionError("quantum input length " + std::to_string(x.size()) +
                             " does not match " + std::to_string(config.qubits) + " qubits");
    }
    const Vector<Real> theta = encode_angles(x.template cast<Real>(), params.scale);
    StateVector<Real> state(config.qubits);
    apply_circuit(state, compile_circuit<Real>(theta, params.weights, config));
    return state;
}

/// z = readout(U(θ, W)|0⟩), length 2Q.
template <typename Real, typename DerivedX>
Vector<Real> qnode_forward(const Eigen::MatrixBase<DerivedX> &x, const QuantumParams<Real> &params,
                           const CircuitConfig &config) {
    return readout(prepare_state(x, params, config));
}

namespace detail {

/// Diagonal of Σ_k g_k O_k over the readout observables.
template <typename Real, typename DerivedG>
std::vector<Real> weighted_observable_diagonal(const StateVector<Real> &state,
                                               const Eigen::MatrixBase<DerivedG> &upstream) {
    const std::size_t q = state.num_qubits();
    std::vector<std::size_t> masks(q);
    for (std::size_t j = 0; j < q; ++j) {
        masks[j] = state.wire_mask(j);
    }
    std::vector<Real> diag(state.size(), Real(0));
    for (std::size_t i = 0; i < state.size(); ++i) {
        Real h = 0;
        for (std::size_t j = 0; j < q; ++j) {
            const Real zj = (i & masks[j]) != 0 ? Real(-1) : Real(1);
            const Real zk = (i & masks[(j + 1) % q]) != 0 ? Real(-1) : Real(1);
            h += static_cast<Real>(upstream(static_cast<Eigen::Index>(j))) * zj +
                 static_cast<Real>(upstream(static_cast<Eigen::Index>(q + j))) * zj * zk;
        }
        diag[i] = h;
    }
    return diag;
}

/// Chain rule through θ = π tanh(s ⊙ x).
template <typename Real, typename DerivedX>
void chain_encoding(const Eigen::MatrixBase<DerivedX> &x, const QuantumParams<Real> &params,
                    const Vector<Real> &angle_grads, QnodeGradients<Real> &out) {
    const Eigen::Index q = params.scale.size();
    out.inputs.resize(q);
    out.scale.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        const Real xj = static_cast<Real>(x(j));
        const Real t = std::tanh(params.scale(j) * xj);
        const Real dtheta = std::numbers::pi_v<Real> * (Real(1) - t * t);
        out.inputs(j) = angle_grads(j) * dtheta * params.scale(j);
        out.scale(j) = angle_grads(j) * dtheta * xj;
    }
}

template <typename Real>
void unpack_weight_grads(const Vector<Real> &angle_grads, const CircuitConfig &config,
                         QnodeGradients<Real> &out) {
    const auto rows = static_cast<Eigen::Index>(config.layers * config.qubits);
    out.weights.resize(rows, 3);
    const auto q = static_cast<Eigen::Index>(config.qubits);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index k = 0; k < 3; ++k) {
            out.weights(r, k) = angle_grads(q + 3 * r + k);
        }
    }
}

} // namespace detail

/**
 * Gradient of Σ_k upstream_k z_k with respect to every differentiable angle of
 * the circuit (encoding angles first, then weights), by adjoint
 * differentiation: one forward pass, then a reverse sweep that un-applies
 * each gate to both the state and the costate H|ψ⟩.
 */
template <typename Real, typename DerivedX, typename DerivedG>
Vector<Real> adjoint_angle_gradients(const Eigen::MatrixBase<DerivedX> &x,
                                     const QuantumParams<Real> &params,
                                     const CircuitConfig &config,
                                     const Eigen::MatrixBase<DerivedG> &upstream) {
    config.validate();
    params.check(config);
    if (upstream.size() != static_cast<Eigen::Index>(config.readout_size())) {
        throw DimensionError("qnode_backward: upstream gradient must have length 2Q");
    }
    const Vector<Real> theta = encode_angles(x.template cast<Real>(), params.scale);
    const auto tape = compile_circuit<Real>(theta, params.weights, config);

    StateVector<Real> psi(config.qubits);
    apply_circuit(psi, tape);

    const auto diag = detail::weighted_observable_diagonal(psi, upstream);
    std::vector<std::complex<Real>> lambda_amps(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        lambda_amps[i] = diag[i] * psi[i];
    }
    StateVector<Real> lambda(config.qubits, std::move(lambda_amps));

    Vector<Real> grads =
        Vector<Real>::Zero(static_cast<Eigen::Index>(config.qubits + config.num_weights()));
    for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
        if (it->slot >= 0) {
            StateVector<Real> mu = psi;
            if (it->kind == GateKind::kRY) {
                mu.apply_pauli_y(it->wire);
            } else {
                mu.apply_pauli_z(it->wire);
            }
            // d/dθ ⟨ψ|H|ψ⟩ = 2 Re⟨λ|(-i/2) G|ψ⟩ = Im⟨λ|G|ψ⟩
            grads(it->slot) = lambda.inner(mu).imag();
        }
        apply_gate(psi, *it, /*adjoint=*/true);
        apply_gate(lambda, *it, /*adjoint=*/true);
    }
    return grads;
}

/// Exact gradients of Σ_k upstream_k z_k with respect to x, W and s.
template <typename Real, typename DerivedX, typename DerivedG>
QnodeGradients<Real> qnode_backward(const Eigen::MatrixBase<DerivedX> &x,
                                    const QuantumParams<Real> &params,
                                    const CircuitConfig &config,
                                    const Eigen::MatrixBase<DerivedG> &upstream) {
    const Vector<Real> angle_grads = adjoint_angle_gradients(x, params, config, upstream);
    QnodeGradients<Real> out;
    detail::chain_encoding(x, params, angle_grads, out);
    detail::unpack_weight_grads(angle_grads, config, out);
    return out;
}

} // namespace qfusion::quantum
