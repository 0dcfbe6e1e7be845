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
 * @file report.hpp
 * Per-fold metric records and their NaN-safe aggregation.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfusion::metrics {

struct FoldMetrics {
    std::size_t fold = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double roc_auc = 0.0;  // NaN when undefined
    std::size_t epochs_ran = 0;
};

/// Metric names in report order.
inline constexpr std::array<std::string_view, 5> kMetricNames{"accuracy", "precision", "recall",
                                                              "f1", "roc_auc"};

double metric_value(const FoldMetrics &fold, std::string_view metric);

struct Summary {
    double mean = 0.0;  // NaN when no value is defined
    double std = 0.0;   // sample std; 0 with a single defined value
    std::size_t count = 0;
};

/// Mean and n-1 std over the non-NaN entries.
Summary summarize(std::span<const double> values);

struct RunReport {
    std::string dataset;
    std::string model;
    std::uint64_t seed = 0;
    std::vector<FoldMetrics> folds;
    std::array<Summary, kMetricNames.size()> summaries{};

    [[nodiscard]] const Summary &summary(std::string_view metric) const;
};

RunReport aggregate_folds(std::string dataset, std::string model, std::uint64_t seed,
                          std::vector<FoldMetrics> folds);

/// "0.943 ± 0.081"; "n/a" for an undefined mean.
std::string format_mean_std(const Summary &s, int digits = 3);

} // namespace qfusion::metrics
