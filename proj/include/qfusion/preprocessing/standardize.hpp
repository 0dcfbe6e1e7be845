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
 * @file standardize.hpp
 * Per-feature z-scoring fitted on one fold's training rows.
 */
#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "qfusion/core/error.hpp"

namespace qfusion::preprocessing {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar> using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Population standard deviations below this are replaced by it.
inline constexpr double kSigmaFloor = 1e-8;

template <typename Scalar> struct StandardizerFit {
    RowVector<Scalar> mu;
    RowVector<Scalar> sigma;
};

/// Mean and population std of each column of `x_train`.
template <typename Derived>
StandardizerFit<typename Derived::Scalar> fit_standardizer(const Eigen::MatrixBase<Derived> &x_train) {
    using Scalar = typename Derived::Scalar;
    if (x_train.rows() < 2) {
        throw DataError("fit_standardizer needs at least 2 training rows, got " +
                        std::to_string(x_train.rows()));
    }
    const Eigen::MatrixXd x = x_train.template cast<double>();
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::RowVectorXd var =
        (x.rowwise() - mu).array().square().colwise().sum() / static_cast<double>(x.rows());
    const Eigen::RowVectorXd sigma = var.array().sqrt().max(kSigmaFloor);
    return {mu.cast<Scalar>(), sigma.cast<Scalar>()};
}

/// (x - mu) / sigma, row by row.
template <typename Scalar, typename Derived>
RowMatrix<Scalar> transform(const StandardizerFit<Scalar> &fit, const Eigen::MatrixBase<Derived> &x) {
    if (x.cols() != fit.mu.size()) {
        throw DimensionError("standardizer fitted on " + std::to_string(fit.mu.size()) +
                             " features, got " + std::to_string(x.cols()));
    }
    RowMatrix<Scalar> out = x.template cast<Scalar>();
    out.rowwise() -= fit.mu;
    out.array().rowwise() /= fit.sigma.array();
    return out;
}

} // namespace qfusion::preprocessing
