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
 * @file dataset.hpp
 * In-memory labelled dataset and the loaders / transforms that prepare the
 * benchmark tasks from local files.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfusion/core/error.hpp"

namespace qfusion::data {

using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
    std::string name;
    FeatureMatrix x;
    std::vector<int> y;                    // 0..C-1
    std::vector<std::string> class_names;  // original label of each class index
    std::vector<std::string> provenance;   // source file, filters, seeds

    [[nodiscard]] std::size_t size() const { return y.size(); }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(x.cols()); }
    [[nodiscard]] std::size_t num_classes() const { return class_names.size(); }

    /// Throws DataError on NaN/Inf, row/label mismatch or non-contiguous labels.
    void validate() const;
};

// ---- CSV ------------------------------------------------------------------

struct CsvSchema {
    /// Field separator; ' ' splits on any run of blanks or tabs.
    char delimiter = ',';
    bool header = true;
    /// Label column, negative values count from the end (-1 is the last).
    int label_column = -1;
    /// When > 0 the last `onehot_columns` columns are one-hot targets and
    /// `label_column` is ignored.
    std::size_t onehot_columns = 0;
};

/**
 * Parse a numeric table with one label column (or a trailing one-hot block).
 * Distinct label strings become classes 0..C-1, in numeric order when every
 * label is numeric and lexicographic order otherwise.
 */
Dataset load_csv(const std::filesystem::path &path, const CsvSchema &schema,
                 const std::string &name = "");

// ---- IDX ------------------------------------------------------------------

/// 28x28 (or any size) uint8 images flattened row-major and scaled by 1/255.
Dataset load_idx_images(const std::filesystem::path &images, const std::filesystem::path &labels,
                        const std::string &name = "");

// ---- transforms -------------------------------------------------------------

/// Keep rows whose class index is in `keep`, remapped to 0..|keep|-1 in
/// ascending order of the kept indices.
Dataset filter_classes(const Dataset &ds, std::span<const int> keep);

/// Same, selecting classes by their original label text.
Dataset filter_class_names(const Dataset &ds, std::span<const std::string> keep);

/**
 * At most `cap` rows with per-class quotas from the largest-remainder
 * rounding of cap * n_c / N (each present class keeps at least one row).
 * Selected rows keep their original relative order. `cap >= N` returns the
 * dataset unchanged.
 */
Dataset stratified_subsample(const Dataset &ds, std::size_t cap, std::uint64_t seed);

struct OneHotLabels {
    std::vector<int> labels;
    std::vector<std::size_t> tie_rows;  // rows with more than one maximal entry
};

/// Arg max of each row, lowest index on ties; an all-zero row is an error.
OneHotLabels onehot_to_index(const Eigen::MatrixXd &y);

// ---- benchmark presets ------------------------------------------------------

struct PresetOptions {
    std::filesystem::path data_dir;
    std::optional<std::filesystem::path> path;  // overrides the default file
    std::optional<std::size_t> max_samples;     // overrides the preset cap
    std::uint64_t seed = 0;
};

/// Canonical preset name for an alias ("wdbc" -> "breast_cancer"), or empty.
std::string canonical_dataset_name(const std::string &name);

/// Names of every preset.
std::vector<std::string> dataset_names();

/// Files a preset reads, for existence checks before a run.
std::vector<std::filesystem::path> dataset_files(const std::string &name,
                                                 const PresetOptions &options);

/**
 * Prepare a preset task:
 *   wine           wine.csv (header, label last)            178 x 13, C=3
 *   breast_cancer  breast_cancer.csv (header, label last)   569 x 30, C=2
 *   covertype      covtype.csv (no header, label last), classes 1-3, cap 5000
 *   fashion_mnist  fashion-mnist/train-*-ubyte, classes 0-2, cap 3000
 *   steel          steel_faults.csv (no header, 27 features + 7 one-hot)
 */
Dataset load_preset(const std::string &name, const PresetOptions &options);

} // namespace qfusion::data
