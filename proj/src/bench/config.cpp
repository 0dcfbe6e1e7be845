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
#include "qfusion/bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qfusion/bench/seeding.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::bench {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys{
    "seed",          "data_dir",     "output_dir",      "folds",           "monitor_fraction",
    "workers",       "epochs",       "batch_size",      "learning_rate",   "weight_decay",
    "max_grad_norm", "label_smoothing", "patience",     "min_delta",       "monitor",
    "qubits",        "layers",       "width",           "heads",           "dropout",
    "classical_variance", "datasets", "models"};

template <typename T> T get(const json &doc, const char *key, T fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::filesystem::path &p) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

DatasetEntry parse_dataset(const json &item, const std::filesystem::path &base) {
    DatasetEntry entry;
    std::string name;
    if (item.is_string()) {
        name = item.get<std::string>();
    } else if (item.is_object()) {
        for (const auto &[key, value] : item.items()) {
            if (key != "name" && key != "path" && key != "max_samples") {
                throw ConfigError("unknown dataset key '" + key + "'");
            }
        }
        name = get<std::string>(item, "name", "");
        if (item.contains("path")) {
            entry.path = resolve(base, get<std::string>(item, "path", ""));
        }
        if (item.contains("max_samples")) {
            entry.max_samples = get<std::size_t>(item, "max_samples", 0);
        }
    } else {
        throw ConfigError("dataset entries must be names or objects");
    }
    entry.name = data::canonical_dataset_name(name);
    if (entry.name.empty()) {
        throw ConfigError("unknown dataset '" + name + "'");
    }
    return entry;
}

ModelEntry parse_model(const json &item) {
    ModelEntry entry;
    if (item.is_string()) {
        entry.kind = models::parse_model_kind(item.get<std::string>());
        return entry;
    }
    if (!item.is_object()) {
        throw ConfigError("model entries must be names or objects");
    }
    for (const auto &[key, value] : item.items()) {
        if (key != "kind" && key != "classical_pca" && key != "depth") {
            throw ConfigError("unknown model key '" + key + "'");
        }
    }
    entry.kind = models::parse_model_kind(get<std::string>(item, "kind", ""));
    if (item.contains("classical_pca")) {
        entry.classical_pca = get<bool>(item, "classical_pca", false);
    }
    entry.depth = get<int>(item, "depth", 0);
    return entry;
}

std::vector<std::string> split_list(const std::string &list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

RunConfig parse_config(const json &doc, const std::filesystem::path &base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[key, value] : doc.items()) {
        if (!kKnownKeys.contains(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    RunConfig c;
    c.seed = get<std::uint64_t>(doc, "seed", c.seed);
    c.data_dir = resolve(base_dir, get<std::string>(doc, "data_dir", c.data_dir.string()));
    c.output_dir = resolve(base_dir, get<std::string>(doc, "output_dir", c.output_dir.string()));
    c.folds = get<std::size_t>(doc, "folds", c.folds);
    c.monitor_fraction = get<double>(doc, "monitor_fraction", c.monitor_fraction);
    c.workers = get<std::size_t>(doc, "workers", c.workers);
    c.train.epochs = get<std::size_t>(doc, "epochs", c.train.epochs);
    c.train.batch_size = get<std::size_t>(doc, "batch_size", c.train.batch_size);
    c.train.learning_rate = get<double>(doc, "learning_rate", c.train.learning_rate);
    c.train.adamw.weight_decay = get<double>(doc, "weight_decay", c.train.adamw.weight_decay);
    c.train.max_grad_norm = get<double>(doc, "max_grad_norm", c.train.max_grad_norm);
    c.train.label_smoothing = get<double>(doc, "label_smoothing", c.train.label_smoothing);
    c.train.patience = get<std::size_t>(doc, "patience", c.train.patience);
    c.train.min_delta = get<double>(doc, "min_delta", c.train.min_delta);
    const auto monitor = get<std::string>(doc, "monitor", "f1");
    if (monitor == "f1") {
        c.train.monitor = training::MonitorMetric::kMacroF1;
    } else if (monitor == "loss") {
        c.train.monitor = training::MonitorMetric::kLoss;
    } else {
        throw ConfigError("monitor must be \"f1\" or \"loss\"");
    }
    c.qubits = get<std::size_t>(doc, "qubits", c.qubits);
    c.layers = get<std::size_t>(doc, "layers", c.layers);
    c.width = get<Eigen::Index>(doc, "width", c.width);
    c.heads = get<Eigen::Index>(doc, "heads", c.heads);
    c.dropout = get<double>(doc, "dropout", c.dropout);
    c.classical_variance = get<double>(doc, "classical_variance", c.classical_variance);

    if (!doc.contains("datasets") || !doc.at("datasets").is_array()) {
        throw ConfigError("config needs a \"datasets\" array");
    }
    for (const auto &item : doc.at("datasets")) {
        c.datasets.push_back(parse_dataset(item, base_dir));
    }
    if (!doc.contains("models") || !doc.at("models").is_array()) {
        throw ConfigError("config needs a \"models\" array");
    }
    for (const auto &item : doc.at("models")) {
        c.models.push_back(parse_model(item));
    }
    validate_config(c, false);
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json to_json(const RunConfig &c) {
    json doc;
    doc["seed"] = c.seed;
    doc["data_dir"] = c.data_dir.string();
    doc["output_dir"] = c.output_dir.string();
    doc["folds"] = c.folds;
    doc["monitor_fraction"] = c.monitor_fraction;
    doc["workers"] = c.workers;
    doc["epochs"] = c.train.epochs;
    doc["batch_size"] = c.train.batch_size;
    doc["learning_rate"] = c.train.learning_rate;
    doc["weight_decay"] = c.train.adamw.weight_decay;
    doc["max_grad_norm"] = c.train.max_grad_norm;
    doc["label_smoothing"] = c.train.label_smoothing;
    doc["patience"] = c.train.patience;
    doc["min_delta"] = c.train.min_delta;
    doc["monitor"] = c.train.monitor == training::MonitorMetric::kMacroF1 ? "f1" : "loss";
    doc["qubits"] = c.qubits;
    doc["layers"] = c.layers;
    doc["width"] = c.width;
    doc["heads"] = c.heads;
    doc["dropout"] = c.dropout;
    doc["classical_variance"] = c.classical_variance;
    doc["datasets"] = json::array();
    for (const auto &d : c.datasets) {
        json item{{"name", d.name}};
        if (d.path) {
            item["path"] = d.path->string();
        }
        if (d.max_samples) {
            item["max_samples"] = *d.max_samples;
        }
        doc["datasets"].push_back(item);
    }
    doc["models"] = json::array();
    for (const auto &m : c.models) {
        json item{{"kind", m.name()}};
        if (m.classical_pca) {
            item["classical_pca"] = *m.classical_pca;
        }
        if (m.depth > 0) {
            item["depth"] = m.depth;
        }
        doc["models"].push_back(item);
    }
    return doc;
}

void validate_config(const RunConfig &c, bool check_files) {
    if (c.folds < 2) {
        throw ConfigError("folds must be at least 2");
    }
    if (!(c.monitor_fraction >= 0.0 && c.monitor_fraction < 1.0)) {
        throw ConfigError("monitor_fraction must lie in [0, 1)");
    }
    if (!(c.classical_variance > 0.0 && c.classical_variance <= 1.0)) {
        throw ConfigError("classical_variance must lie in (0, 1]");
    }
    if (!(c.train.label_smoothing >= 0.0 && c.train.label_smoothing < 1.0)) {
        throw ConfigError("label_smoothing must lie in [0, 1)");
    }
    c.train.validate();
    quantum::CircuitConfig{c.qubits, c.layers}.validate();
    if (c.width < 1 || c.heads < 1 || c.width % c.heads != 0) {
        throw ConfigError("width must be a positive multiple of heads");
    }
    if (!(c.dropout >= 0.0 && c.dropout < 1.0)) {
        throw ConfigError("dropout must lie in [0, 1)");
    }
    if (c.datasets.empty() || c.models.empty()) {
        throw ConfigError("config needs at least one dataset and one model");
    }
    for (const auto &m : c.models) {
        if (m.depth < 0 || m.depth > 8) {
            throw ConfigError("model depth must lie in [0, 8]");
        }
    }
    if (check_files) {
        for (const auto &d : c.datasets) {
            const data::PresetOptions options{c.data_dir, d.path, d.max_samples, c.seed};
            for (const auto &file : data::dataset_files(d.name, options)) {
                if (!std::filesystem::exists(file)) {
                    throw ConfigError("dataset '" + d.name + "': missing file " + file.string());
                }
            }
        }
    }
}

std::string config_hash(const RunConfig &config) {
    json doc = to_json(config);
    doc.erase("output_dir");
    doc.erase("workers");
    doc.erase("data_dir");
    for (auto &d : doc["datasets"]) {
        d.erase("path");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(doc.dump())));
    return buf;
}

void restrict_models(RunConfig &config, const std::string &list) {
    std::vector<ModelEntry> kept;
    for (const auto &name : split_list(list)) {
        const auto kind = models::parse_model_kind(name);
        bool found = false;
        for (const auto &m : config.models) {
            if (m.kind == kind) {
                kept.push_back(m);
                found = true;
            }
        }
        if (!found) {
            kept.push_back(ModelEntry{kind, std::nullopt, 0});
        }
    }
    config.models = std::move(kept);
}

void restrict_datasets(RunConfig &config, const std::string &list) {
    std::vector<DatasetEntry> kept;
    for (const auto &name : split_list(list)) {
        const auto canonical = data::canonical_dataset_name(name);
        if (canonical.empty()) {
            throw ConfigError("unknown dataset '" + name + "'");
        }
        bool found = false;
        for (const auto &d : config.datasets) {
            if (d.name == canonical) {
                kept.push_back(d);
                found = true;
            }
        }
        if (!found) {
            kept.push_back(DatasetEntry{canonical, std::nullopt, std::nullopt});
        }
    }
    config.datasets = std::move(kept);
}

} // namespace qfusion::bench
