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
 * @file metrics.hpp
 * Test-fold classification metrics. Undefined values (an AUC without both
 * classes present) are returned as quiet NaN.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qfusion::metrics {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

/// Fraction of matching entries; throws on empty or unequal inputs.
double accuracy(std::span<const int> predicted, std::span<const int> truth);

struct PerClassScores {
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
};

struct MacroScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Per-class P, R and F1; a zero denominator gives 0.
PerClassScores per_class_prf1(std::span<const int> predicted, std::span<const int> truth,
                              std::size_t num_classes);

/// Unweighted mean of the per-class scores over all `num_classes` classes.
MacroScores macro_prf1(std::span<const int> predicted, std::span<const int> truth,
                       std::size_t num_classes);

/**
 * Mann-Whitney AUC: (R_pos - n_pos (n_pos + 1) / 2) / (n_pos n_neg) with
 * mid-ranks for ties. NaN when either class is absent.
 */
double roc_auc_binary(std::span<const double> scores, std::span<const int> truth);

/// Pairwise reference: mean over (pos, neg) pairs of [s_p > s_n] + 0.5 [s_p == s_n].
double roc_auc_pairwise(std::span<const double> scores, std::span<const int> truth);

/// Mean one-vs-rest AUC over classes with both positives and negatives.
double roc_auc_ovr_macro(const Eigen::MatrixXd &probabilities, std::span<const int> truth);

} // namespace qfusion::metrics
