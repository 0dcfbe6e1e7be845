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
 * @file parameter_shift.hpp
 * Parameter-shift gradients, df/dθ = (f(θ + π/2) - f(θ - π/2)) / 2 for every
 * rotation angle. Costs two full circuit evaluations per angle; used as an
 * independent reference for the adjoint gradients.
 */
#pragma once

#include <numbers>

#include "qfusion/quantum/circuit.hpp"

namespace qfusion::quantum {

/// Jacobian of the readout with respect to every circuit angle:
/// rows are readout entries (2Q), columns are angle slots (Q + 3LQ).
template <typename Real, typename DerivedX>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>
parameter_shift_jacobian(const Eigen::MatrixBase<DerivedX> &x, const QuantumParams<Real> &params,
                         const CircuitConfig &config) {
    config.validate();
    params.check(config);
    const Vector<Real> theta = encode_angles(x.template cast<Real>(), params.scale);
    const auto tape = compile_circuit<Real>(theta, params.weights, config);
    const auto n_slots = static_cast<Eigen::Index>(config.qubits + config.num_weights());
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> jac(
        static_cast<Eigen::Index>(config.readout_size()), n_slots);
    jac.setZero();
    const Real shift = std::numbers::pi_v<Real> / 2;

    auto evaluate = [&](std::size_t gate_index, Real delta) {
        StateVector<Real> state(config.qubits);
        for (std::size_t i = 0; i < tape.size(); ++i) {
            Gate<Real> g = tape[i];
            if (i == gate_index) {
                g.angle += delta;
            }
            apply_gate(state, g);
        }
        return readout(state);
    };

    for (std::size_t i = 0; i < tape.size(); ++i) {
        if (tape[i].slot < 0) {
            continue;
        }
        jac.col(tape[i].slot) = (evaluate(i, shift) - evaluate(i, -shift)) / Real(2);
    }
    return jac;
}

/// d z_k / dW for readout entry k, shaped like the weights ((L*Q) x 3).
template <typename Real, typename DerivedX>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
parameter_shift_grad(const Eigen::MatrixBase<DerivedX> &x, const QuantumParams<Real> &params,
                     const CircuitConfig &config, std::size_t k) {
    if (k >= config.readout_size()) {
        throw DimensionError("parameter_shift_grad: output index out of range");
    }
    const auto jac = parameter_shift_jacobian(x, params, config);
    const Vector<Real> row = jac.row(static_cast<Eigen::Index>(k)).transpose();
    QnodeGradients<Real> out;
    detail::unpack_weight_grads(row, config, out);
    return out.weights;
}

/// Gradients of Σ_k upstream_k z_k for x, W and s via parameter shift.
template <typename Real, typename DerivedX, typename DerivedG>
QnodeGradients<Real> parameter_shift_backward(const Eigen::MatrixBase<DerivedX> &x,
                                              const QuantumParams<Real> &params,
                                              const CircuitConfig &config,
                                              const Eigen::MatrixBase<DerivedG> &upstream) {
    const auto jac = parameter_shift_jacobian(x, params, config);
    const Vector<Real> angle_grads = jac.transpose() * upstream.template cast<Real>();
    QnodeGradients<Real> out;
    detail::chain_encoding(x, params, angle_grads, out);
    detail::unpack_weight_grads(angle_grads, config, out);
    return out;
}

} // namespace qfusion::quantum
