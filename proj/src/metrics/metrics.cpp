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
#include "qfusion/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qfusion/core/error.hpp"

namespace qfusion::metrics {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": " + std::to_string(a) + " predictions vs " +
                             std::to_string(b) + " labels");
    }
    if (a == 0) {
        throw DataError(std::string(what) + ": empty input");
    }
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

} // namespace

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    check_lengths(predicted.size(), truth.size(), "accuracy");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        correct += predicted[i] == truth[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

PerClassScores per_class_prf1(std::span<const int> predicted, std::span<const int> truth,
                              std::size_t num_classes) {
    check_lengths(predicted.size(), truth.size(), "macro_prf1");
    std::vector<double> tp(num_classes, 0.0);
    std::vector<double> fp(num_classes, 0.0);
    std::vector<double> fn(num_classes, 0.0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto p = static_cast<std::size_t>(predicted[i]);
        const auto t = static_cast<std::size_t>(truth[i]);
        if (p >= num_classes || t >= num_classes) {
            throw DataError("macro_prf1: label outside 0.." + std::to_string(num_classes - 1));
        }
        if (p == t) {
            tp[t] += 1.0;
        } else {
            fp[p] += 1.0;
            fn[t] += 1.0;
        }
    }
    PerClassScores out;
    for (std::size_t c = 0; c < num_classes; ++c) {
        const double precision = ratio(tp[c], tp[c] + fp[c]);
        const double recall = ratio(tp[c], tp[c] + fn[c]);
        out.precision.push_back(precision);
        out.recall.push_back(recall);
        out.f1.push_back(ratio(2.0 * precision * recall, precision + recall));
    }
    return out;
}

MacroScores macro_prf1(std::span<const int> predicted, std::span<const int> truth,
                       std::size_t num_classes) {
    const auto per_class = per_class_prf1(predicted, truth, num_classes);
    const auto mean = [num_classes](const std::vector<double> &v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(num_classes);
    };
    return {mean(per_class.precision), mean(per_class.recall), mean(per_class.f1)};
}

double roc_auc_binary(std::span<const double> scores, std::span<const int> truth) {
    check_lengths(scores.size(), truth.size(), "roc_auc_binary");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        // Ranks i+1..j share the mid-rank.
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]] == 1) {
                rank_sum += mid;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        return kUndefined;
    }
    const double np = static_cast<double>(n_pos);
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

double roc_auc_pairwise(std::span<const double> scores, std::span<const int> truth) {
    check_lengths(scores.size(), truth.size(), "roc_auc_pairwise");
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (truth[p] != 1) {
            continue;
        }
        for (std::size_t q = 0; q < scores.size(); ++q) {
            if (truth[q] == 1) {
                continue;
            }
            ++pairs;
            wins += scores[p] > scores[q] ? 1.0 : (scores[p] == scores[q] ? 0.5 : 0.0);
        }
    }
    return pairs == 0 ? kUndefined : wins / static_cast<double>(pairs);
}

double roc_auc_ovr_macro(const Eigen::MatrixXd &probabilities, std::span<const int> truth) {
    if (static_cast<std::size_t>(probabilities.rows()) != truth.size()) {
        throw DimensionError("roc_auc_ovr_macro: " + std::to_string(probabilities.rows()) +
                             " rows vs " + std::to_string(truth.size()) + " labels");
    }
    double total = 0.0;
    std::size_t defined = 0;
    std::vector<double> scores(truth.size());
    std::vector<int> positive(truth.size());
    for (Eigen::Index c = 0; c < probabilities.cols(); ++c) {
        for (std::size_t i = 0; i < truth.size(); ++i) {
            scores[i] = probabilities(static_cast<Eigen::Index>(i), c);
            positive[i] = truth[i] == c ? 1 : 0;
        }
        const double auc = roc_auc_binary(scores, positive);
        if (!std::isnan(auc)) {
            total += auc;
            ++defined;
        }
    }
    return defined == 0 ? kUndefined : total / static_cast<double>(defined);
}

} // namespace qfusion::metrics
