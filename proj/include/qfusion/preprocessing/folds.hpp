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
 * @file folds.hpp
 * Stratified K-fold plans and the inner monitor split used for early
 * stopping. All index lists are sorted ascending.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qfusion::preprocessing {

using IndexList = std::vector<std::size_t>;

struct FoldPlan {
    std::size_t fold_index = 0;
    IndexList train_idx;    // inner training rows (monitor rows removed)
    IndexList monitor_idx;  // empty when the split was infeasible
    IndexList test_idx;
    std::uint64_t seed = 0;

    [[nodiscard]] bool has_monitor() const { return !monitor_idx.empty(); }
};

struct MonitorSplit {
    IndexList inner_train;
    IndexList monitor;
    bool enabled = false;
};

/// Per-class sample counts; labels must be 0..C-1 with every class present.
std::vector<std::size_t> class_counts(std::span<const int> labels);

/// min(k_requested, smallest class count).
std::size_t effective_folds(std::span<const int> labels, std::size_t k_requested);

/**
 * Assign every sample to one of K test folds. Each class is shuffled with
 * `seed` and dealt round-robin, continuing the rotation from the previous
 * class, so per-class and total fold sizes differ by at most one.
 * Returned plans carry train/test indices only.
 */
std::vector<FoldPlan> stratified_kfold(std::span<const int> labels, std::size_t k_requested,
                                       std::uint64_t seed);

/**
 * Hold out round(fraction * n_c) (at least one) rows of each class from
 * `train_idx`. When any class has fewer than two training rows the split is
 * skipped: `enabled` is false and every row stays in `inner_train`.
 */
MonitorSplit monitor_split(std::span<const std::size_t> train_idx, std::span<const int> labels,
                           double fraction, std::uint64_t seed);

/// Folds plus a monitor split inside each training fold.
std::vector<FoldPlan> plan_folds(std::span<const int> labels, std::size_t k_requested,
                                 double monitor_fraction, std::uint64_t seed);

} // namespace qfusion::preprocessing
