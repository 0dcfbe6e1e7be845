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
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "qfusion/core/error.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::data {

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    if (delimiter == ' ') {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
                ++i;
            }
            if (i == line.size()) {
                break;
            }
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
                ++i;
            }
            fields.push_back(line.substr(start, i - start));
        }
        return fields;
    }
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(delimiter, start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view s, double &out) {
    s = trim(s);
    if (s.empty()) {
        return false;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

Dataset load_csv(const std::filesystem::path &path, const CsvSchema &schema,
                 const std::string &name) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    std::vector<std::vector<double>> onehot;
    std::size_t width = 0;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = schema.header;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto fields = split(line, schema.delimiter);
        if (width == 0) {
            width = fields.size();
            const std::size_t targets = schema.onehot_columns > 0 ? schema.onehot_columns : 1;
            if (width <= targets) {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": too few columns (" + std::to_string(width) + ")");
            }
        } else if (fields.size() != width) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()));
        }

        std::size_t label_at = width;  // sentinel: none
        std::size_t feature_end = width;
        if (schema.onehot_columns > 0) {
            feature_end = width - schema.onehot_columns;
        } else {
            const long col = schema.label_column < 0
                                 ? static_cast<long>(width) + schema.label_column
                                 : schema.label_column;
            if (col < 0 || col >= static_cast<long>(width)) {
                throw DataError("label column " + std::to_string(schema.label_column) +
                                " out of range for " + std::to_string(width) + " columns");
            }
            label_at = static_cast<std::size_t>(col);
        }

        std::vector<double> features;
        features.reserve(width);
        std::vector<double> targets;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_at) {
                raw_labels.emplace_back(trim(fields[c]));
                continue;
            }
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": column " +
                                std::to_string(c + 1) + " is not numeric: '" +
                                std::string(trim(fields[c])) + "'");
            }
            (c < feature_end ? features : targets).push_back(v);
        }
        rows.push_back(std::move(features));
        if (schema.onehot_columns > 0) {
            onehot.push_back(std::move(targets));
        }
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": no data rows");
    }

    Dataset ds;
    ds.name = name.empty() ? path.stem().string() : name;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    ds.x.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            ds.x(i, j) = static_cast<float>(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }

    if (schema.onehot_columns > 0) {
        Eigen::MatrixXd y(n, static_cast<Eigen::Index>(schema.onehot_columns));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index c = 0; c < y.cols(); ++c) {
                y(i, c) = onehot[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            }
        }
        auto converted = onehot_to_index(y);
        ds.y = std::move(converted.labels);
        for (std::size_t c = 0; c < schema.onehot_columns; ++c) {
            ds.class_names.push_back(std::to_string(c));
        }
        if (!converted.tie_rows.empty()) {
            ds.provenance.push_back("onehot ties resolved to lowest index: " +
                                    std::to_string(converted.tie_rows.size()) + " rows");
        }
    } else {
        bool numeric = true;
        for (const auto &label : raw_labels) {
            double v = 0.0;
            numeric = numeric && parse_double(label, v);
        }
        std::vector<std::string> names = raw_labels;
        std::sort(names.begin(), names.end(), [numeric](const std::string &a, const std::string &b) {
            if (numeric) {
                double va = 0.0;
                double vb = 0.0;
                parse_double(a, va);
                parse_double(b, vb);
                return va < vb;
            }
            return a < b;
        });
        names.erase(std::unique(names.begin(), names.end()), names.end());
        std::map<std::string, int> index;
        for (std::size_t c = 0; c < names.size(); ++c) {
            index[names[c]] = static_cast<int>(c);
        }
        ds.y.reserve(raw_labels.size());
        for (const auto &label : raw_labels) {
            ds.y.push_back(index.at(label));
        }
        ds.class_names = std::move(names);
    }
    ds.provenance.insert(ds.provenance.begin(),
                         "source: " + path.filename().string() + " (" + std::to_string(n) + " rows)");
    ds.validate();
    return ds;
}

} // namespace qfusion::data
