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
#include <cmath>
#include <numeric>
#include <random>

#include "qfusion/core/error.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::data {

namespace {

Dataset take_rows(const Dataset &ds, const std::vector<std::size_t> &rows) {
    Dataset out;
    out.name = ds.name;
    out.class_names = ds.class_names;
    out.provenance = ds.provenance;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), ds.x.cols());
    out.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = ds.x.row(static_cast<Eigen::Index>(rows[i]));
        out.y.push_back(ds.y[rows[i]]);
    }
    return out;
}

} // namespace

void Dataset::validate() const {
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
        throw DataError(name + ": " + std::to_string(x.rows()) + " rows but " +
                        std::to_string(y.size()) + " labels");
    }
    if (y.empty()) {
        throw DataError(name + ": empty dataset");
    }
    if (!x.allFinite()) {
        throw DataError(name + ": features contain NaN or Inf");
    }
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
            throw DataError(name + ": label " + std::to_string(label) + " outside 0.." +
                            std::to_string(class_names.size() - 1));
        }
        ++counts[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw DataError(name + ": class " + class_names[c] + " has no rows");
        }
    }
}

Dataset filter_classes(const Dataset &ds, std::span<const int> keep) {
    if (keep.empty()) {
        throw DataError(ds.name + ": filter_classes with an empty class set");
    }
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> remap(ds.class_names.size(), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const int c = sorted[i];
        if (c < 0 || static_cast<std::size_t>(c) >= ds.class_names.size()) {
            throw DataError(ds.name + ": class index " + std::to_string(c) + " does not exist");
        }
        remap[static_cast<std::size_t>(c)] = static_cast<int>(i);
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.y.size(); ++i) {
        if (remap[static_cast<std::size_t>(ds.y[i])] >= 0) {
            rows.push_back(i);
        }
    }
    Dataset out = take_rows(ds, rows);
    std::string kept;
    out.class_names.clear();
    for (int c : sorted) {
        out.class_names.push_back(ds.class_names[static_cast<std::size_t>(c)]);
        kept += (kept.empty() ? "" : ",") + ds.class_names[static_cast<std::size_t>(c)];
    }
    for (auto &label : out.y) {
        label = remap[static_cast<std::size_t>(label)];
    }
    out.provenance.push_back("classes kept: {" + kept + "} -> 0.." +
                             std::to_string(sorted.size() - 1) + " (" +
                             std::to_string(rows.size()) + " rows)");
    out.validate();
    return out;
}

Dataset filter_class_names(const Dataset &ds, std::span<const std::string> keep) {
    std::vector<int> indices;
    for (const auto &name : keep) {
        const auto it = std::find(ds.class_names.begin(), ds.class_names.end(), name);
        if (it == ds.class_names.end()) {
            throw DataError(ds.name + ": class '" + name + "' does not exist");
        }
        indices.push_back(static_cast<int>(it - ds.class_names.begin()));
    }
    return filter_classes(ds, indices);
}

Dataset stratified_subsample(const Dataset &ds, std::size_t cap, std::uint64_t seed) {
    const std::size_t n = ds.size();
    if (cap >= n) {
        return ds;
    }
    const std::size_t num_classes = ds.num_classes();
    if (cap < num_classes) {
        throw ConfigError("subsample cap " + std::to_string(cap) + " is below the class count " +
                          std::to_string(num_classes));
    }
    std::vector<std::vector<std::size_t>> groups(num_classes);
    for (std::size_t i = 0; i < n; ++i) {
        groups[static_cast<std::size_t>(ds.y[i])].push_back(i);
    }

    // Largest-remainder quotas, at least one per class.
    std::vector<std::size_t> quota(num_classes);
    std::vector<double> remainder(num_classes);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        const double exact = static_cast<double>(cap) * static_cast<double>(groups[c].size()) /
                             static_cast<double>(n);
        quota[c] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact)));
        remainder[c] = exact - std::floor(exact);
        assigned += quota[c];
    }
    std::vector<std::size_t> order(num_classes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < cap && i < order.size(); ++i) {
        if (quota[order[i]] < groups[order[i]].size()) {
            ++quota[order[i]];
            ++assigned;
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> rows;
    rows.reserve(cap);
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto &group = groups[c];
        std::shuffle(group.begin(), group.end(), rng);
        rows.insert(rows.end(), group.begin(),
                    group.begin() + static_cast<long>(std::min(quota[c], group.size())));
    }
    std::sort(rows.begin(), rows.end());
    Dataset out = take_rows(ds, rows);
    out.provenance.push_back("stratified subsample: " + std::to_string(rows.size()) + " of " +
                             std::to_string(n) + " rows, seed " + std::to_string(seed));
    return out;
}

OneHotLabels onehot_to_index(const Eigen::MatrixXd &y) {
    OneHotLabels out;
    out.labels.reserve(static_cast<std::size_t>(y.rows()));
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        Eigen::Index arg = 0;
        const double best = y.row(i).maxCoeff(&arg);  // first maximum
        if (!(best != 0.0)) {
            throw DataError("one-hot row " + std::to_string(i) + " has no positive entry");
        }
        if ((y.row(i).array() == best).count() > 1) {
            out.tie_rows.push_back(static_cast<std::size_t>(i));
        }
        out.labels.push_back(static_cast<int>(arg));
    }
    return out;
}

} // namespace qfusion::data
