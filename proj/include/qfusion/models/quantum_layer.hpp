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
 * @file quantum_layer.hpp
 * The variational circuit as an autodiff op over a batch: row i of the
 * N x Q input maps to row i of the N x 2Q readout. Simulation always runs in
 * double precision; the backward pass uses adjoint differentiation.
 */
#pragma once

#include "qfusion/autodiff/layers.hpp"
#include "qfusion/quantum/circuit.hpp"

namespace qfusion::models {

using autodiff::Matrix;
using autodiff::Tensor;

namespace detail {

template <typename Scalar>
quantum::QuantumParams<double> to_params(const Tensor<Scalar> &weights, const Tensor<Scalar> &scale) {
    quantum::QuantumParams<double> p;
    p.weights = weights.value().template cast<double>();
    p.scale = scale.value().row(0).transpose().template cast<double>();
    return p;
}

} // namespace detail

/// z = readout(U(π tanh(s ⊙ x), W)|0⟩) for every row of `x`.
template <typename Scalar>
Tensor<Scalar> quantum_layer(const Tensor<Scalar> &x, const Tensor<Scalar> &weights,
                             const Tensor<Scalar> &scale, const quantum::CircuitConfig &config) {
    config.validate();
    const auto q = static_cast<Eigen::Index>(config.qubits);
    if (x.cols() != q) {
        throw DimensionError("quantum_layer: input has " + std::to_string(x.cols()) +
                             " columns for " + std::to_string(q) + " qubits");
    }
    const auto params = detail::to_params(weights, scale);
    params.check(config);
    Matrix<Scalar> out(x.rows(), 2 * q);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::VectorXd xi = x.value().row(i).transpose().template cast<double>();
        out.row(i) = quantum::qnode_forward(xi, params, config).transpose().template cast<Scalar>();
    }
    return autodiff::make_result<Scalar>(
        std::move(out), {x, weights, scale}, [x, weights, scale, config](autodiff::Node<Scalar> &self) {
            const auto params = detail::to_params(weights, scale);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                const Eigen::VectorXd g = self.grad.row(i).transpose().template cast<double>();
                if (g.isZero(0.0)) {
                    continue;
                }
                const Eigen::VectorXd xi = x.value().row(i).transpose().template cast<double>();
                const auto grads = quantum::qnode_backward(xi, params, config, g);
                if (x.requires_grad()) {
                    x.node()->grad.row(i) += grads.inputs.transpose().template cast<Scalar>();
                }
                if (weights.requires_grad()) {
                    weights.node()->grad += grads.weights.template cast<Scalar>();
                }
                if (scale.requires_grad()) {
                    scale.node()->grad.row(0) += grads.scale.transpose().template cast<Scalar>();
                }
            }
        });
}

/// Trainable circuit parameters: W ((L*Q) x 3) ~ U(-0.01, 0.01) and s = 1.
template <typename Scalar> class QuantumLayer {
  public:
    QuantumLayer() = default;
    QuantumLayer(const quantum::CircuitConfig &config, autodiff::Rng &rng) : config_(config) {
        config_.validate();
        const auto p = quantum::QuantumParams<double>::initialized(config_, rng);
        weights_ = Tensor<Scalar>::parameter(p.weights.template cast<Scalar>());
        scale_ = Tensor<Scalar>::parameter(Matrix<Scalar>::Ones(1, static_cast<Eigen::Index>(config_.qubits)));
    }

    [[nodiscard]] Tensor<Scalar> operator()(const Tensor<Scalar> &x) const {
        return quantum_layer(x, weights_, scale_, config_);
    }

    [[nodiscard]] const quantum::CircuitConfig &config() const { return config_; }
    [[nodiscard]] Eigen::Index readout_size() const {
        return static_cast<Eigen::Index>(config_.readout_size());
    }
    Tensor<Scalar> &weights() { return weights_; }
    Tensor<Scalar> &scale() { return scale_; }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        out.push_back(weights_);
        out.push_back(scale_);
    }

  private:
    quantum::CircuitConfig config_;
    Tensor<Scalar> weights_;
    Tensor<Scalar> scale_;
};

} // namespace qfusion::models
