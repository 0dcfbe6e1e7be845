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
 * @file loss.hpp
 * Classification losses as autodiff ops (mean over the batch).
 */
#pragma once

#include <cmath>
#include <span>
#include <string>

#include "qfusion/autodiff/tensor.hpp"

namespace qfusion::training {

using autodiff::Matrix;
using autodiff::Tensor;

/// mean_i [max(ℓ,0) - ℓ y + log(1 + e^{-|ℓ|})] over an N x 1 logit column.
template <typename Scalar>
Tensor<Scalar> bce_with_logits(const Tensor<Scalar> &logits, std::span<const int> labels) {
    if (logits.cols() != 1 || static_cast<std::size_t>(logits.rows()) != labels.size()) {
        throw DimensionError("bce_with_logits: logits " +
                             qfusion::detail::shape_str(logits.rows(), logits.cols()) + " for " +
                             std::to_string(labels.size()) + " labels");
    }
    const auto n = logits.rows();
    Matrix<Scalar> y(n, 1);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, 0) = static_cast<Scalar>(labels[static_cast<std::size_t>(i)]);
        const double l = static_cast<double>(logits.value()(i, 0));
        total += std::max(l, 0.0) - l * static_cast<double>(y(i, 0)) + std::log1p(std::exp(-std::abs(l)));
    }
    Matrix<Scalar> out(1, 1);
    out(0, 0) = static_cast<Scalar>(total / static_cast<double>(n));
    return autodiff::make_result<Scalar>(std::move(out), {logits}, [logits, y, n](autodiff::Node<Scalar> &self) {
        const Scalar g = self.grad(0, 0) / static_cast<Scalar>(n);
        const Matrix<Scalar> p =
            (Scalar(1) / (Scalar(1) + (-logits.value().array()).exp())).matrix();
        logits.node()->grad += g * (p - y);
    });
}

/// -(1/N) Σ_i Σ_c y^ε_ic log softmax(ℓ_i)_c with y^ε = (1-ε) onehot + ε/C.
template <typename Scalar>
Tensor<Scalar> cross_entropy_smoothed(const Tensor<Scalar> &logits, std::span<const int> labels,
                                      double epsilon) {
    if (static_cast<std::size_t>(logits.rows()) != labels.size() || logits.cols() < 2) {
        throw DimensionError("cross_entropy_smoothed: logits " +
                             qfusion::detail::shape_str(logits.rows(), logits.cols()) + " for " +
                             std::to_string(labels.size()) + " labels");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw ConfigError("label smoothing must lie in [0, 1)");
    }
    const auto n = logits.rows();
    const auto c = logits.cols();
    const Scalar off = static_cast<Scalar>(epsilon / static_cast<double>(c));
    Matrix<Scalar> target = Matrix<Scalar>::Constant(n, c, off);
    Matrix<Scalar> probs(n, c);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto label = labels[static_cast<std::size_t>(i)];
        if (label < 0 || label >= c) {
            throw DataError("cross_entropy_smoothed: label " + std::to_string(label) + " out of range");
        }
        target(i, label) += static_cast<Scalar>(1.0 - epsilon);
        const Eigen::ArrayXd row = logits.value().row(i).transpose().template cast<double>().array();
        const double mx = row.maxCoeff();
        const double lse = mx + std::log((row - mx).exp().sum());
        const Eigen::ArrayXd log_p = row - lse;
        total -= (target.row(i).transpose().template cast<double>().array() * log_p).sum();
        probs.row(i) = log_p.exp().template cast<Scalar>().transpose();
    }
    Matrix<Scalar> out(1, 1);
    out(0, 0) = static_cast<Scalar>(total / static_cast<double>(n));
    return autodiff::make_result<Scalar>(
        std::move(out), {logits}, [logits, probs, target, n](autodiff::Node<Scalar> &self) {
            logits.node()->grad += (self.grad(0, 0) / static_cast<Scalar>(n)) * (probs - target);
        });
}

/// BCE for a single-logit head, smoothed cross-entropy otherwise.
template <typename Scalar>
Tensor<Scalar> classification_loss(const Tensor<Scalar> &logits, std::span<const int> labels,
                                   double label_smoothing) {
    return logits.cols() == 1 ? bce_with_logits(logits, labels)
                              : cross_entropy_smoothed(logits, labels, label_smoothing);
}

} // namespace qfusion::training
