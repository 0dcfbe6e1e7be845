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
#include "qfusion/preprocessing/folds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qfusion/core/error.hpp"

namespace qfusion::preprocessing {

namespace {

std::vector<IndexList> group_by_class(std::span<const std::size_t> rows,
                                      std::span<const int> labels, std::size_t num_classes) {
    std::vector<IndexList> groups(num_classes);
    for (std::size_t row : rows) {
        groups[static_cast<std::size_t>(labels[row])].push_back(row);
    }
    return groups;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::vector<std::size_t> class_counts(std::span<const int> labels) {
    if (labels.empty()) {
        throw DataError("no labels");
    }
    int max_label = -1;
    for (int y : labels) {
        if (y < 0) {
            throw DataError("negative label " + std::to_string(y));
        }
        max_label = std::max(max_label, y);
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int y : labels) {
        ++counts[static_cast<std::size_t>(y)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw DataError("class " + std::to_string(c) + " has no samples");
        }
    }
    return counts;
}

std::size_t effective_folds(std::span<const int> labels, std::size_t k_requested) {
    const auto counts = class_counts(labels);
    const std::size_t k = std::min(k_requested, *std::min_element(counts.begin(), counts.end()));
    if (k < 2) {
        throw DataError("stratified K-fold needs at least 2 samples per class");
    }
    return k;
}

std::vector<FoldPlan> stratified_kfold(std::span<const int> labels, std::size_t k_requested,
                                       std::uint64_t seed) {
    const std::size_t k = effective_folds(labels, k_requested);
    const std::size_t num_classes = class_counts(labels).size();
    IndexList all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    auto groups = group_by_class(all, labels, num_classes);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> assignment(labels.size());
    std::size_t cursor = 0;
    for (auto &group : groups) {
        std::shuffle(group.begin(), group.end(), rng);
        for (std::size_t row : group) {
            assignment[row] = cursor % k;
            ++cursor;
        }
    }

    std::vector<FoldPlan> plans(k);
    for (std::size_t f = 0; f < k; ++f) {
        plans[f].fold_index = f;
        plans[f].seed = mix(seed, f);
    }
    for (std::size_t row = 0; row < labels.size(); ++row) {
        for (std::size_t f = 0; f < k; ++f) {
            (assignment[row] == f ? plans[f].test_idx : plans[f].train_idx).push_back(row);
        }
    }
    return plans;
}

MonitorSplit monitor_split(std::span<const std::size_t> train_idx, std::span<const int> labels,
                           double fraction, std::uint64_t seed) {
    MonitorSplit out;
    out.inner_train.assign(train_idx.begin(), train_idx.end());
    if (!(fraction > 0.0 && fraction < 1.0) || train_idx.empty()) {
        return out;
    }
    int max_label = 0;
    for (std::size_t row : train_idx) {
        max_label = std::max(max_label, labels[row]);
    }
    auto groups = group_by_class(train_idx, labels, static_cast<std::size_t>(max_label) + 1);
    for (const auto &group : groups) {
        if (group.size() == 1) {
            return out;
        }
    }

    std::mt19937_64 rng(seed);
    out.inner_train.clear();
    for (auto &group : groups) {
        if (group.empty()) {
            continue;
        }
        std::shuffle(group.begin(), group.end(), rng);
        const auto take = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(fraction * static_cast<double>(group.size()))), 1,
            group.size() - 1);
        out.monitor.insert(out.monitor.end(), group.begin(), group.begin() + static_cast<long>(take));
        out.inner_train.insert(out.inner_train.end(), group.begin() + static_cast<long>(take),
                               group.end());
    }
    std::sort(out.monitor.begin(), out.monitor.end());
    std::sort(out.inner_train.begin(), out.inner_train.end());
    out.enabled = true;
    return out;
}

std::vector<FoldPlan> plan_folds(std::span<const int> labels, std::size_t k_requested,
                                 double monitor_fraction, std::uint64_t seed) {
    auto plans = stratified_kfold(labels, k_requested, seed);
    for (auto &plan : plans) {
        auto split = monitor_split(plan.train_idx, labels, monitor_fraction, mix(plan.seed, 0x4D4F4E));
        plan.train_idx = std::move(split.inner_train);
        plan.monitor_idx = std::move(split.monitor);
    }
    return plans;
}

} // namespace qfusion::preprocessing
