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
 * @file config.hpp
 * Run configuration, stored as JSON:
 *
 *   {
 *     "seed": 0,
 *     "data_dir": "data",            // relative to the config file
 *     "output_dir": "results",
 *     "folds": 5, "monitor_fraction": 0.10, "workers": 1,
 *     "epochs": 30, "batch_size": 64, "learning_rate": 1e-3,
 *     "weight_decay": 1e-3, "max_grad_norm": 1.0, "label_smoothing": 0.05,
 *     "patience": 7, "min_delta": 1e-4, "monitor": "f1" | "loss",
 *     "qubits": 9, "layers": 3, "width": 64, "heads": 4, "dropout": 0.10,
 *     "classical_variance": 0.95,
 *     "datasets": ["wine", {"name": "covertype", "max_samples": 2000, "path": "..."}],
 *     "models": ["best_classical", {"kind": "deep_fusion", "classical_pca": false, "depth": 3}]
 *   }
 *
 * Every key is optional except "datasets" and "models".
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfusion/models/model_spec.hpp"
#include "qfusion/training/trainer.hpp"

namespace qfusion::bench {

struct DatasetEntry {
    std::string name;  // canonical preset name
    std::optional<std::filesystem::path> path;
    std::optional<std::size_t> max_samples;
};

struct ModelEntry {
    models::ModelKind kind = models::ModelKind::kClassical;
    std::optional<bool> classical_pca;  // unset = family default
    int depth = 0;                      // 0 = family default

    [[nodiscard]] std::string name() const { return std::string(models::to_string(kind)); }
    [[nodiscard]] bool pca_enabled() const {
        return classical_pca.value_or(models::default_classical_pca(kind));
    }
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path data_dir = "data";
    std::filesystem::path output_dir = "results";
    std::size_t folds = 5;
    double monitor_fraction = 0.10;
    std::size_t workers = 1;
    training::TrainOptions train{};
    std::size_t qubits = 9;  // upper bound; a fold uses min(qubits, d, n_train)
    std::size_t layers = 3;
    Eigen::Index width = 64;
    Eigen::Index heads = 4;
    double dropout = 0.10;
    double classical_variance = 0.95;
    std::vector<DatasetEntry> datasets;
    std::vector<ModelEntry> models;
};

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
/// Relative paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});

RunConfig load_config(const std::filesystem::path &path);

nlohmann::json to_json(const RunConfig &config);

/// Range checks; with `check_files` also that every dataset file exists.
void validate_config(const RunConfig &config, bool check_files);

/// Hex FNV-1a of the canonical JSON of the settings that affect results
/// (output and worker settings excluded).
std::string config_hash(const RunConfig &config);

/// Keep only the listed models / datasets (comma-separated names).
void restrict_models(RunConfig &config, const std::string &list);
void restrict_datasets(RunConfig &config, const std::string &list);

} // namespace qfusion::bench
