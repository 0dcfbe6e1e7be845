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
 * @file gradcheck.hpp
 * Central finite-difference oracle for autodiff graphs (64-bit only).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qfusion/autodiff/tensor.hpp"

namespace qfusion::testing {

using autodiff::Matrix;
using autodiff::Tensor;

/// |a - n| / max(|a|, |n|, floor)
inline double relative_error(double analytic, double numeric, double floor = 1e-3) {
    return std::abs(analytic - numeric) /
           std::max({std::abs(analytic), std::abs(numeric), floor});
}

struct GradCheckResult {
    double max_relative_error = 0.0;
    double max_abs_error = 0.0;
    std::size_t checked = 0;
};

/**
 * Compare the gradient produced by `backward` with central differences for
 * every entry of every tensor in `wrt`. `loss_fn` must rebuild the graph from
 * the current tensor values and return a scalar.
 */
template <typename LossFn>
GradCheckResult check_gradients(std::vector<Tensor<double>> wrt, LossFn &&loss_fn,
                                double h = 1e-5) {
    for (auto &t : wrt) {
        t.zero_grad();
    }
    autodiff::backward(loss_fn());
    std::vector<Matrix<double>> analytic;
    analytic.reserve(wrt.size());
    for (const auto &t : wrt) {
        analytic.push_back(t.grad());
    }

    GradCheckResult result;
    for (std::size_t p = 0; p < wrt.size(); ++p) {
        auto &value = wrt[p].mutable_value();
        for (Eigen::Index i = 0; i < value.size(); ++i) {
            const double saved = value.data()[i];
            value.data()[i] = saved + h;
            const double up = loss_fn().item();
            value.data()[i] = saved - h;
            const double down = loss_fn().item();
            value.data()[i] = saved;
            const double numeric = (up - down) / (2 * h);
            const double a = analytic[p].data()[i];
            result.max_relative_error =
                std::max(result.max_relative_error, relative_error(a, numeric));
            result.max_abs_error = std::max(result.max_abs_error, std::abs(a - numeric));
            ++result.checked;
        }
    }
    return result;
}

inline Matrix<double> random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng,
                                    double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix<double> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = dist(rng);
    }
    return m;
}

} // namespace qfusion::testing
