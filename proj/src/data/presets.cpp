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
#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "qfusion/core/error.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::data {

namespace {

struct Preset {
    std::size_t default_cap = 0;  // 0 = no subsampling
};

const std::map<std::string, Preset> &presets() {
    static const std::map<std::string, Preset> table{
        {"wine", {}},
        {"breast_cancer", {}},
        {"covertype", {5000}},
        {"fashion_mnist", {3000}},
        {"steel", {}},
    };
    return table;
}

std::filesystem::path single_file(const std::string &name, const PresetOptions &options) {
    if (options.path) {
        return *options.path;
    }
    if (name == "wine") {
        return options.data_dir / "wine.csv";
    }
    if (name == "breast_cancer") {
        return options.data_dir / "breast_cancer.csv";
    }
    if (name == "covertype") {
        return options.data_dir / "covtype.csv";
    }
    return options.data_dir / "steel_faults.csv";
}

std::filesystem::path fashion_dir(const PresetOptions &options) {
    return options.path ? *options.path : options.data_dir / "fashion-mnist";
}

} // namespace

std::string canonical_dataset_name(const std::string &name) {
    static const std::map<std::string, std::string> aliases{
        {"wine", "wine"},
        {"breast_cancer", "breast_cancer"},
        {"breastcancer", "breast_cancer"},
        {"wdbc", "breast_cancer"},
        {"covertype", "covertype"},
        {"covtype", "covertype"},
        {"fashion_mnist", "fashion_mnist"},
        {"fashionmnist", "fashion_mnist"},
        {"steel", "steel"},
        {"steel_plates_faults", "steel"},
        {"steelplatesfaults", "steel"},
    };
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    const auto it = aliases.find(key);
    return it == aliases.end() ? std::string{} : it->second;
}

std::vector<std::string> dataset_names() {
    std::vector<std::string> names;
    for (const auto &[name, preset] : presets()) {
        names.push_back(name);
    }
    return names;
}

std::vector<std::filesystem::path> dataset_files(const std::string &name,
                                                 const PresetOptions &options) {
    const std::string key = canonical_dataset_name(name);
    if (key.empty()) {
        throw ConfigError("unknown dataset '" + name + "'");
    }
    if (key == "fashion_mnist") {
        const auto dir = fashion_dir(options);
        return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte"};
    }
    return {single_file(key, options)};
}

Dataset load_preset(const std::string &name, const PresetOptions &options) {
    const std::string key = canonical_dataset_name(name);
    if (key.empty()) {
        throw ConfigError("unknown dataset '" + name + "'");
    }
    const auto files = dataset_files(key, options);
    Dataset ds;
    if (key == "wine" || key == "breast_cancer") {
        ds = load_csv(files[0], CsvSchema{}, key);
    } else if (key == "covertype") {
        ds = load_csv(files[0], CsvSchema{',', false, -1, 0}, key);
        const std::array<std::string, 3> keep{"1", "2", "3"};
        ds = filter_class_names(ds, keep);
    } else if (key == "steel") {
        ds = load_csv(files[0], CsvSchema{',', false, -1, 7}, key);
    } else {
        ds = load_idx_images(files[0], files[1], key);
        const std::array<int, 3> keep{0, 1, 2};
        ds = filter_classes(ds, keep);
    }
    const std::size_t cap = options.max_samples.value_or(presets().at(key).default_cap);
    if (cap > 0) {
        ds = stratified_subsample(ds, cap, options.seed);
    }
    ds.validate();
    return ds;
}

} // namespace qfusion::data
