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
 * @file pca.hpp
 * Principal components from the thin SVD of the centered training matrix.
 *
 * Each component is sign-normalized so that its largest-magnitude entry is
 * positive (first such entry on ties), which makes fits reproducible across
 * SVD backends. Explained variances use the n-1 normalization; the ratios
 * do not depend on it.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "qfusion/preprocessing/standardize.hpp"

namespace qfusion::preprocessing {

/// How many components to keep.
struct PcaMode {
    enum class Kind { kComponents, kVariance };
    Kind kind = Kind::kVariance;
    std::size_t components = 0;
    double fraction = 0.95;

    static PcaMode n_components(std::size_t r) { return {Kind::kComponents, r, 0.0}; }
    static PcaMode variance(double fraction) { return {Kind::kVariance, 0, fraction}; }
};

/// Full thin decomposition; truncate with `select_components`.
struct PcaDecomposition {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd components;          // d x min(n, d), sign-normalized
    Eigen::VectorXd explained_variance;  // s_i^2 / (n - 1)
    Eigen::VectorXd explained_variance_ratio;
    Eigen::Index n_train = 0;
};

template <typename Scalar> struct PcaFit {
    RowVector<Scalar> mean;
    RowMatrix<Scalar> components;  // d x r, orthonormal columns
    Eigen::VectorXd explained_variance_ratio;

    [[nodiscard]] Eigen::Index dim() const { return components.rows(); }
    [[nodiscard]] Eigen::Index retained() const { return components.cols(); }
};

template <typename Derived>
PcaDecomposition decompose(const Eigen::MatrixBase<Derived> &x_train) {
    if (x_train.rows() < 1 || x_train.cols() < 1) {
        throw DataError("PCA on an empty matrix");
    }
    PcaDecomposition out;
    const Eigen::MatrixXd x = x_train.template cast<double>();
    out.n_train = x.rows();
    out.mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - out.mean;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    out.components = svd.matrixV();
    const Eigen::VectorXd s2 = svd.singularValues().array().square();
    const double denom = std::max<double>(1.0, static_cast<double>(x.rows() - 1));
    out.explained_variance = s2 / denom;
    const double total = s2.sum();
    out.explained_variance_ratio =
        total > 0.0 ? Eigen::VectorXd(s2 / total) : Eigen::VectorXd::Zero(s2.size());

    for (Eigen::Index c = 0; c < out.components.cols(); ++c) {
        Eigen::Index arg = 0;
        out.components.col(c).cwiseAbs().maxCoeff(&arg);
        if (out.components(arg, c) < 0.0) {
            out.components.col(c) *= -1.0;
        }
    }
    return out;
}

/// Number of components `mode` keeps from `decomp`.
inline std::size_t retained_components(const PcaDecomposition &decomp, const PcaMode &mode) {
    const auto available = static_cast<std::size_t>(decomp.components.cols());
    if (mode.kind == PcaMode::Kind::kComponents) {
        if (mode.components < 1 || mode.components > available) {
            throw ConfigError("PCA: requested " + std::to_string(mode.components) +
                              " components but at most " + std::to_string(available) +
                              " are available");
        }
        return mode.components;
    }
    if (!(mode.fraction > 0.0 && mode.fraction <= 1.0)) {
        throw ConfigError("PCA: variance fraction must lie in (0, 1]");
    }
    double cumulative = 0.0;
    for (std::size_t r = 0; r < available; ++r) {
        cumulative += decomp.explained_variance_ratio(static_cast<Eigen::Index>(r));
        if (cumulative >= mode.fraction - 1e-12) {
            return r + 1;
        }
    }
    return std::max<std::size_t>(1, available);
}

template <typename Scalar>
PcaFit<Scalar> select_components(const PcaDecomposition &decomp, const PcaMode &mode) {
    const auto r = static_cast<Eigen::Index>(retained_components(decomp, mode));
    PcaFit<Scalar> fit;
    fit.mean = decomp.mean.cast<Scalar>();
    fit.components = decomp.components.leftCols(r).cast<Scalar>();
    fit.explained_variance_ratio = decomp.explained_variance_ratio.head(r);
    return fit;
}

template <typename Derived>
PcaFit<typename Derived::Scalar> fit_pca(const Eigen::MatrixBase<Derived> &x_train,
                                         const PcaMode &mode) {
    return select_components<typename Derived::Scalar>(decompose(x_train), mode);
}

/// (x - mean) P, one reduced row per input row.
template <typename Scalar, typename Derived>
RowMatrix<Scalar> project(const PcaFit<Scalar> &fit, const Eigen::MatrixBase<Derived> &x) {
    if (x.cols() != fit.dim()) {
        throw DimensionError("PCA fitted on " + std::to_string(fit.dim()) + " features, got " +
                             std::to_string(x.cols()));
    }
    RowMatrix<Scalar> centered = x.template cast<Scalar>();
    centered.rowwise() -= fit.mean;
    return centered * fit.components;
}

/// Inverse map from the reduced space.
template <typename Scalar, typename Derived>
RowMatrix<Scalar> reconstruct(const PcaFit<Scalar> &fit, const Eigen::MatrixBase<Derived> &z) {
    RowMatrix<Scalar> out = z.template cast<Scalar>() * fit.components.transpose();
    out.rowwise() += fit.mean;
    return out;
}

} // namespace qfusion::preprocessing
