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
#include "qfusion/bench/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qfusion/bench/runner.hpp"
#include "qfusion/core/error.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::bench {

namespace {

std::size_t dataset_rank(const std::string &name) {
    const auto names = data::dataset_names();
    const auto it = std::find(names.begin(), names.end(), name);
    return static_cast<std::size_t>(it - names.begin());
}

std::size_t kind_rank(const std::string &label) {
    const auto kind = kind_of_label(label);
    if (!kind) {
        return models::kAllModelKinds.size();
    }
    return static_cast<std::size_t>(
        std::find(models::kAllModelKinds.begin(), models::kAllModelKinds.end(), *kind) -
        models::kAllModelKinds.begin());
}

std::string fixed(double v, int digits) {
    if (std::isnan(v)) {
        return "";
    }
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

} // namespace

std::optional<models::ModelKind> kind_of_label(const std::string &label) {
    std::optional<models::ModelKind> best;
    std::size_t best_len = 0;
    for (const auto kind : models::kAllModelKinds) {
        const std::string name(models::to_string(kind));
        const bool match = label == name || (label.size() > name.size() &&
                                             label.compare(0, name.size(), name) == 0 &&
                                             label[name.size()] == '_');
        if (match && name.size() > best_len) {
            best = kind;
            best_len = name.size();
        }
    }
    return best;
}

std::vector<metrics::RunReport> load_results(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("results directory " + dir.string() + " does not exist");
    }
    std::vector<metrics::RunReport> reports;
    std::vector<std::filesystem::path> files;
    for (const auto &sub : std::filesystem::directory_iterator(dir)) {
        if (!sub.is_directory()) {
            continue;
        }
        for (const auto &file : std::filesystem::directory_iterator(sub.path())) {
            if (file.path().extension() == ".json") {
                files.push_back(file.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto &file : files) {
        std::ifstream in(file);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw DataError(file.string() + ": " + e.what());
        }
        if (doc.is_object() && doc.contains("folds") && doc.contains("model")) {
            reports.push_back(report_from_json(doc));
        }
    }
    if (reports.empty()) {
        throw DataError("no results found under " + dir.string());
    }
    std::stable_sort(reports.begin(), reports.end(), [](const auto &a, const auto &b) {
        const auto ka = std::make_tuple(dataset_rank(a.dataset), a.dataset, kind_rank(a.model), a.model);
        const auto kb = std::make_tuple(dataset_rank(b.dataset), b.dataset, kind_rank(b.model), b.model);
        return ka < kb;
    });
    return reports;
}

std::string summary_markdown(const std::vector<metrics::RunReport> &reports) {
    std::ostringstream os;
    std::string current;
    std::vector<const metrics::RunReport *> block;
    auto flush = [&] {
        if (block.empty()) {
            return;
        }
        double best = -1.0;
        for (const auto *r : block) {
            const double f1 = r->summary("f1").mean;
            if (!std::isnan(f1)) {
                best = std::max(best, f1);
            }
        }
        os << "## " << block.front()->dataset << "\n\n";
        os << "| Model | Accuracy | Precision | Recall | F1 | ROC-AUC | Folds |\n";
        os << "|---|---|---|---|---|---|---|\n";
        for (const auto *r : block) {
            const double f1 = r->summary("f1").mean;
            const bool bold = !std::isnan(f1) && std::abs(f1 - best) < 1e-12;
            auto cell = [&](const std::string &text) { return bold ? "**" + text + "**" : text; };
            os << "| " << cell(r->model);
            for (const auto metric : metrics::kMetricNames) {
                os << " | " << cell(metrics::format_mean_std(r->summary(metric)));
            }
            os << " | " << r->folds.size() << " |\n";
        }
        os << '\n';
        block.clear();
    };
    for (const auto &r : reports) {
        if (r.dataset != current) {
            flush();
            current = r.dataset;
        }
        block.push_back(&r);
    }
    flush();
    return os.str();
}

std::string summary_csv(const std::vector<metrics::RunReport> &reports) {
    std::ostringstream os;
    os << "dataset,model";
    for (const auto metric : metrics::kMetricNames) {
        os << ',' << metric << "_mean," << metric << "_std";
    }
    os << ",folds\n";
    for (const auto &r : reports) {
        os << r.dataset << ',' << r.model;
        for (const auto metric : metrics::kMetricNames) {
            const auto &s = r.summary(metric);
            os << ',' << fixed(s.mean, 6) << ',' << fixed(s.count > 0 ? s.std : std::nan(""), 6);
        }
        os << ',' << r.folds.size() << '\n';
    }
    return os.str();
}

AccuracyChart accuracy_chart(const std::vector<metrics::RunReport> &reports) {
    AccuracyChart chart;
    std::map<std::string, std::size_t> index;
    std::map<std::string, const metrics::RunReport *> best_fusion;
    auto group_for = [&](const std::string &dataset) -> BarGroup & {
        auto [it, inserted] = index.try_emplace(dataset, chart.groups.size());
        if (inserted) {
            chart.groups.push_back(BarGroup{dataset, {}});
        }
        return chart.groups[it->second];
    };
    auto bar_for = [](const metrics::RunReport &r, std::string label) {
        const auto &s = r.summary("accuracy");
        return Bar{std::move(label), 100.0 * s.mean, 100.0 * s.std, s.count};
    };
    for (const auto &r : reports) {
        const auto kind = kind_of_label(r.model);
        if (kind && !models::uses_classical(*kind)) {
            continue;
        }
        auto &group = group_for(r.dataset);
        if (kind && models::is_fusion(*kind)) {
            const double f1 = r.summary("f1").mean;
            auto &slot = best_fusion[r.dataset];
            if (!std::isnan(f1) && (slot == nullptr || f1 > slot->summary("f1").mean)) {
                slot = &r;
            }
            continue;
        }
        group.bars.push_back(bar_for(r, r.model));
    }
    for (const auto &[dataset, r] : best_fusion) {
        if (r != nullptr) {
            group_for(dataset).bars.push_back(bar_for(*r, "best fusion (" + r->model + ")"));
        }
    }
    std::erase_if(chart.groups, [](const BarGroup &g) { return g.bars.empty(); });
    return chart;
}

void emit_summary(const std::filesystem::path &results_dir, const std::filesystem::path &out_dir) {
    const auto reports = load_results(results_dir);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "summary.md", summary_markdown(reports));
    write_file(out_dir / "summary.csv", summary_csv(reports));
    write_file(out_dir / "accuracy.svg", render_svg(accuracy_chart(reports)));
}

} // namespace qfusion::bench
