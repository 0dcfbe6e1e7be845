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
 * @file runner.hpp
 * Cross-validated benchmark over (dataset, model, fold) jobs.
 *
 * Output layout under the output directory:
 *   results.csv                       one row per (dataset, model, fold)
 *   <dataset>/<model>.json            folds, mean, std, config_hash
 *   <dataset>/<model>_history.csv     per-epoch train loss and monitor metric
 *
 * Nothing in these files depends on wall-clock time or worker count.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfusion/bench/config.hpp"
#include "qfusion/bench/seeding.hpp"
#include "qfusion/data/dataset.hpp"
#include "qfusion/metrics/report.hpp"
#include "qfusion/preprocessing/folds.hpp"
#include "qfusion/training/trainer.hpp"

namespace qfusion::bench {

/// Model inputs for one fold after fold-local standardization and PCA.
struct PreparedFold {
    training::SplitData<float> train;
    training::SplitData<float> monitor;  // empty without a monitor split
    training::SplitData<float> test;
    std::size_t qubits = 0;              // min(Q_max, d, n_train)
    Eigen::Index classical_dim = 0;
    Eigen::Index classical_retained = 0;  // after PCA (== dim when disabled)
};

/**
 * Fit the standardizer and both projections on `plan.train_idx` only and
 * apply them to the monitor and test rows. `classical_pca` selects the
 * variance-mode projection for the classical branch.
 */
PreparedFold prepare_fold(const data::Dataset &ds, const preprocessing::FoldPlan &plan,
                          bool classical_pca, const RunConfig &config);

models::ModelSpec model_spec_for(const ModelEntry &entry, const PreparedFold &fold,
                                 std::size_t num_classes, const RunConfig &config);

struct FoldResult {
    metrics::FoldMetrics metrics;
    training::TrainResult training;
    bool ok = true;
    std::string error;
};

/// Train and evaluate one model on one prepared fold.
FoldResult run_fold(const PreparedFold &fold, const ModelEntry &entry, std::size_t fold_index,
                    std::size_t num_classes, const RunConfig &config, const SeedTree &seeds);

/// File stem for a model entry: the kind name plus any non-default overrides.
std::string model_label(const ModelEntry &entry);

struct ModelRun {
    std::string dataset;
    std::string model;
    std::vector<FoldResult> folds;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] metrics::RunReport report(std::uint64_t seed) const;
};

struct BenchmarkOutcome {
    std::vector<ModelRun> runs;
    std::size_t failed_jobs = 0;
};

/// Run every configured job, writing results as each (dataset, model) completes.
/// `log` receives one progress line per job; pass nullptr for silence.
BenchmarkOutcome run_benchmark(const RunConfig &config, std::ostream *log);

/// JSON document for one (dataset, model); undefined values become null.
nlohmann::json run_to_json(const ModelRun &run, const RunConfig &config);

/// Inverse of the `mean`/`std`/`folds` part of `run_to_json`.
metrics::RunReport report_from_json(const nlohmann::json &doc);

} // namespace qfusion::bench
