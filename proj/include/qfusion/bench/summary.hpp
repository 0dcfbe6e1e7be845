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
 * @file summary.hpp
 * Tables and the accuracy bar chart built from a results directory.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qfusion/metrics/report.hpp"
#include "qfusion/models/model_spec.hpp"

namespace qfusion::bench {

/// Every <dataset>/<model>.json under `dir`, ordered by dataset then model
/// family. Throws DataError when none is found.
std::vector<metrics::RunReport> load_results(const std::filesystem::path &dir);

/// Family of a results label such as "deep_fusion" or "deep_fusion_k4".
std::optional<models::ModelKind> kind_of_label(const std::string &label);

/// One markdown table per dataset; rows with the highest mean F1 are bold.
std::string summary_markdown(const std::vector<metrics::RunReport> &reports);

/// Flat table: dataset, model, metric means and stds, fold count.
std::string summary_csv(const std::vector<metrics::RunReport> &reports);

struct Bar {
    std::string label;
    double mean = 0.0;  // accuracy in percent
    double std = 0.0;
    std::size_t count = 0;
};

struct BarGroup {
    std::string dataset;
    std::vector<Bar> bars;
};

struct AccuracyChart {
    std::vector<BarGroup> groups;
    double y_min = 70.0;
    double y_max = 100.0;
};

/**
 * Per dataset: one bar per classical baseline and one "best fusion" bar for
 * the fusion model with the highest mean F1, labelled with its variant.
 * Quantum-only families are left out.
 */
AccuracyChart accuracy_chart(const std::vector<metrics::RunReport> &reports);

/// Self-contained SVG; bars are clipped to [y_min, y_max].
std::string render_svg(const AccuracyChart &chart);

/// Write summary.md, summary.csv and accuracy.svg into `out_dir`.
void emit_summary(const std::filesystem::path &results_dir, const std::filesystem::path &out_dir);

} // namespace qfusion::bench
