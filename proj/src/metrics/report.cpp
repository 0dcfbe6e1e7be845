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
#include "qfusion/metrics/report.hpp"

#include <cmath>
#include <cstdio>

#include "qfusion/core/error.hpp"

namespace qfusion::metrics {

namespace {

std::size_t metric_index(std::string_view metric) {
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        if (kMetricNames[i] == metric) {
            return i;
        }
    }
    throw UsageError("unknown metric '" + std::string(metric) + "'");
}

} // namespace

double metric_value(const FoldMetrics &fold, std::string_view metric) {
    switch (metric_index(metric)) {
    case 0:
        return fold.accuracy;
    case 1:
        return fold.precision;
    case 2:
        return fold.recall;
    case 3:
        return fold.f1;
    default:
        return fold.roc_auc;
    }
}

Summary summarize(std::span<const double> values) {
    Summary s;
    double total = 0.0;
    for (double v : values) {
        if (!std::isnan(v)) {
            total += v;
            ++s.count;
        }
    }
    if (s.count == 0) {
        s.mean = std::nan("");
        return s;
    }
    s.mean = total / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) {
            if (!std::isnan(v)) {
                ss += (v - s.mean) * (v - s.mean);
            }
        }
        s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

const Summary &RunReport::summary(std::string_view metric) const {
    return summaries[metric_index(metric)];
}

RunReport aggregate_folds(std::string dataset, std::string model, std::uint64_t seed,
                          std::vector<FoldMetrics> folds) {
    if (folds.empty()) {
        throw DataError("aggregate_folds: no folds");
    }
    RunReport report;
    report.dataset = std::move(dataset);
    report.model = std::move(model);
    report.seed = seed;
    report.folds = std::move(folds);
    std::vector<double> values(report.folds.size());
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        for (std::size_t f = 0; f < report.folds.size(); ++f) {
            values[f] = metric_value(report.folds[f], kMetricNames[m]);
        }
        report.summaries[m] = summarize(values);
    }
    return report;
}

std::string format_mean_std(const Summary &s, int digits) {
    if (std::isnan(s.mean)) {
        return "n/a";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f ± %.*f", digits, s.mean, digits, s.std);
    return buf;
}

} // namespace qfusion::metrics
