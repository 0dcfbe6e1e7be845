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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>

#include <catch_amalgamated.hpp>

#include "qfusion/bench/config.hpp"
#include "qfusion/bench/runner.hpp"
#include "qfusion/bench/seeding.hpp"
#include "qfusion/bench/summary.hpp"

using namespace qfusion::bench;
using qfusion::models::ModelKind;
using qfusion::metrics::FoldMetrics;
using qfusion::metrics::RunReport;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
const fs::path kDataDir{QFUSION_DATA_DIR};

bool have_wine() { return fs::exists(kDataDir / "wine.csv"); }

fs::path scratch_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("qfusion_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunReport report(const std::string &dataset, const std::string &model,
                 std::vector<double> accuracies, std::vector<double> f1s) {
    std::vector<FoldMetrics> folds;
    for (std::size_t k = 0; k < accuracies.size(); ++k) {
        FoldMetrics m;
        m.fold = k;
        m.accuracy = accuracies[k];
        m.precision = accuracies[k];
        m.recall = accuracies[k];
        m.f1 = f1s[k];
        m.roc_auc = 0.9;
        folds.push_back(m);
    }
    return qfusion::metrics::aggregate_folds(dataset, model, 0, std::move(folds));
}

json minimal_config() {
    return json::parse(R"({"seed": 3, "folds": 2, "epochs": 2,
                           "datasets": ["wine"], "models": ["classical", "midfusion_attn"]})");
}
} // namespace

TEST_CASE("seed tree", "[bench][seeding]") {
    const SeedTree root = seed_everything(0);
    SECTION("paths are deterministic") {
        CHECK(root.child("wine").child("classical").child(3).value() ==
              seed_everything(0).child("wine").child("classical").child(3).value());
        CHECK(root.child("a").value() != root.child("b").value());
        CHECK(root.child("wine").child(0).value() != root.child("wine").child(1).value());
        CHECK(seed_everything(1).child("wine").value() != root.child("wine").value());
    }
    SECTION("FNV-1a reference values") {
        CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
        CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    }
    SECTION("no collisions across a million jobs") {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(1'000'000);
        const SeedTree ds = root.child("wine");
        for (int m = 0; m < 1000; ++m) {
            const SeedTree model = ds.child("model_" + std::to_string(m));
            for (std::uint64_t k = 0; k < 1000; ++k) {
                seen.insert(model.child(k).child("init").value());
            }
        }
        CHECK(seen.size() == 1'000'000);
    }
}

TEST_CASE("config parsing", "[bench][config]") {
    SECTION("defaults and overrides") {
        const RunConfig c = parse_config(minimal_config(), "/base");
        CHECK(c.seed == 3);
        CHECK(c.folds == 2);
        CHECK(c.train.epochs == 2);
        CHECK(c.train.batch_size == 64);
        CHECK(c.qubits == 9);
        CHECK(c.layers == 3);
        CHECK(c.data_dir == fs::path("/base/data"));
        REQUIRE(c.models.size() == 2);
        CHECK(c.models[1].kind == ModelKind::kMidfusionAttn);
        CHECK(c.models[1].pca_enabled());
        CHECK_FALSE(c.models[0].pca_enabled());
    }
    SECTION("round trip through JSON") {
        auto doc = minimal_config();
        doc["models"].push_back({{"kind", "deep_fusion"}, {"depth", 5}, {"classical_pca", true}});
        doc["datasets"].push_back({{"name", "wdbc"}, {"max_samples", 200}});
        const RunConfig a = parse_config(doc, "/base");
        const RunConfig b = parse_config(to_json(a), "/base");
        CHECK(to_json(a) == to_json(b));
        CHECK(config_hash(a) == config_hash(b));
        CHECK(b.datasets[1].name == "breast_cancer");
        CHECK(b.datasets[1].max_samples == 200u);
        CHECK(b.models[2].depth == 5);
    }
    SECTION("hash ignores output settings and tracks training settings") {
        RunConfig a = parse_config(minimal_config());
        RunConfig b = a;
        b.output_dir = "/elsewhere";
        b.workers = 4;
        CHECK(config_hash(a) == config_hash(b));
        b.train.learning_rate = 2e-3;
        CHECK(config_hash(a) != config_hash(b));
    }
    SECTION("errors") {
        auto doc = minimal_config();
        doc["epochz"] = 3;
        CHECK_THROWS_AS(parse_config(doc), qfusion::ConfigError);
        doc = minimal_config();
        doc["models"].push_back("hybrid");
        CHECK_THROWS_AS(parse_config(doc), qfusion::ConfigError);
        doc = minimal_config();
        doc["datasets"] = json::array({"iris"});
        CHECK_THROWS_AS(parse_config(doc), qfusion::ConfigError);
        doc = minimal_config();
        doc["monitor"] = "accuracy";
        CHECK_THROWS_AS(parse_config(doc), qfusion::ConfigError);
        doc = minimal_config();
        doc["folds"] = "five";
        CHECK_THROWS_AS(parse_config(doc), qfusion::ConfigError);
        doc = minimal_config();
        doc["qubits"] = 20;
        CHECK_THROWS_AS(validate_config(parse_config(doc), false), qfusion::ConfigError);
    }
    SECTION("restricting models and datasets") {
        RunConfig c = parse_config(minimal_config());
        restrict_models(c, "midfusion_attn");
        REQUIRE(c.models.size() == 1);
        CHECK(c.models[0].kind == ModelKind::kMidfusionAttn);
        CHECK_THROWS_AS(restrict_models(c, "classical,nope"), qfusion::ConfigError);
        restrict_datasets(c, "wdbc");
        REQUIRE(c.datasets.size() == 1);
        CHECK(c.datasets[0].name == "breast_cancer");
        CHECK_THROWS_AS(restrict_datasets(c, "iris"), qfusion::ConfigError);
    }
}

TEST_CASE("model labels", "[bench][labels]") {
    CHECK(model_label(ModelEntry{ModelKind::kDeepFusion, std::nullopt, 0}) == "deep_fusion");
    CHECK(model_label(ModelEntry{ModelKind::kDeepFusion, std::nullopt, 3}) == "deep_fusion");
    CHECK(model_label(ModelEntry{ModelKind::kDeepFusion, std::nullopt, 5}) == "deep_fusion_k5");
    CHECK(model_label(ModelEntry{ModelKind::kClassical, false, 0}) == "classical");
    CHECK(model_label(ModelEntry{ModelKind::kClassical, true, 0}) == "classical_pca");
    CHECK(model_label(ModelEntry{ModelKind::kMidfusionAttn, false, 0}) == "midfusion_attn_nopca");
    CHECK(kind_of_label("late_fusion_deep") == ModelKind::kLateFusionDeep);
    CHECK(kind_of_label("late_fusion") == ModelKind::kLateFusion);
    CHECK(kind_of_label("deep_fusion_k5") == ModelKind::kDeepFusion);
    CHECK_FALSE(kind_of_label("svm").has_value());
}

TEST_CASE("summary tables", "[bench][summary]") {
    const std::vector<RunReport> reports{
        report("wine", "classical", {0.90, 0.92}, {0.89, 0.91}),
        report("wine", "midfusion_attn", {0.95, 0.97}, {0.95, 0.97}),
        report("wine", "quantum_only", {0.40, 0.42}, {0.38, 0.40}),
    };
    const std::string md = summary_markdown(reports);
    CHECK(md.find("## wine") != std::string::npos);
    CHECK(md.find("| **midfusion_attn** | **0.960 ± 0.014** |") != std::string::npos);
    CHECK(md.find("| classical | 0.910 ± 0.014 |") != std::string::npos);

    const std::string csv = summary_csv(reports);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header.rfind("dataset,model,", 0) == 0);
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) {
        rows += line.empty() ? 0 : 1;
    }
    CHECK(rows == 3);
}

TEST_CASE("accuracy chart", "[bench][summary][svg]") {
    const std::vector<RunReport> reports{
        report("wine", "classical", {0.90, 0.92}, {0.89, 0.91}),
        report("wine", "best_classical", {0.93}, {0.92}),
        report("wine", "late_fusion", {0.95, 0.95}, {0.96, 0.96}),
        report("wine", "midfusion_attn", {0.97, 0.99}, {0.95, 0.97}),
        report("wine", "quantum_only", {0.40, 0.42}, {0.38, 0.40}),
    };
    const AccuracyChart chart = accuracy_chart(reports);
    REQUIRE(chart.groups.size() == 1);
    const auto &bars = chart.groups[0].bars;
    REQUIRE(bars.size() == 3);
    for (const auto &bar : bars) {
        CHECK(bar.label.find("quantum") == std::string::npos);
    }
    // selection is by F1, so late_fusion wins despite the lower accuracy
    CHECK(bars[2].label == "best fusion (late_fusion)");
    CHECK_THAT(bars[2].mean, Catch::Matchers::WithinAbs(95.0, 1e-9));
    CHECK(bars[1].count == 1);

    const std::string svg = render_svg(chart);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("data-min=\"70.00\" data-max=\"100.00\"") != std::string::npos);
    CHECK(svg.find("quantum_only") == std::string::npos);
    CHECK(svg.find("best fusion (late_fusion)") != std::string::npos);
    std::size_t bars_drawn = 0, error_bars = 0;
    for (std::size_t pos = 0; (pos = svg.find("class=\"bar\"", pos)) != std::string::npos; ++pos) {
        ++bars_drawn;
    }
    for (std::size_t pos = 0; (pos = svg.find("class=\"error-bar\"", pos)) != std::string::npos;
         ++pos) {
        ++error_bars;
    }
    CHECK(bars_drawn == 3);
    // the single-fold bar and the zero-spread late_fusion bar have none
    CHECK(error_bars == 1);
}

TEST_CASE("results JSON round trip", "[bench][results]") {
    ModelRun run;
    run.dataset = "wine";
    run.model = "classical";
    for (std::size_t k = 0; k < 3; ++k) {
        FoldResult f;
        f.metrics.fold = k;
        f.metrics.accuracy = 0.8 + 0.05 * static_cast<double>(k);
        f.metrics.f1 = f.metrics.accuracy;
        f.metrics.roc_auc = k == 1 ? std::numeric_limits<double>::quiet_NaN() : 0.9;
        run.folds.push_back(f);
    }
    run.folds[2].ok = false;
    run.folds[2].error = "diverged";
    const RunConfig config = parse_config(minimal_config());
    const json doc = run_to_json(run, config);
    CHECK(doc.at("dataset") == "wine");
    CHECK(doc.at("seed") == 3);
    CHECK(doc.at("config_hash") == config_hash(config));
    CHECK(doc.at("folds").size() == 3);
    CHECK(doc.at("folds")[1].at("roc_auc").is_null());
    CHECK(doc.at("folds")[2].at("status") == "failed");
    const RunReport back = report_from_json(json::parse(doc.dump()));
    CHECK(back.folds.size() == 2);
    CHECK_THAT(back.summary("accuracy").mean, Catch::Matchers::WithinAbs(0.825, 1e-12));
    CHECK(back.summary("roc_auc").count == 1);
}

TEST_CASE("fold preparation never sees test rows", "[bench][leakage]") {
    if (!have_wine()) {
        SKIP("wine.csv not present in " << kDataDir);
    }
    RunConfig config = parse_config(minimal_config());
    config.data_dir = kDataDir;
    const auto ds = qfusion::data::load_preset("wine", {kDataDir, std::nullopt, std::nullopt, 0});
    const auto plans = qfusion::preprocessing::plan_folds(ds.y, 5, 0.1, 11);
    const auto &plan = plans[0];

    auto tampered = ds;
    for (const auto i : plan.test_idx) {
        tampered.x.row(static_cast<Eigen::Index>(i)) *= -50.0;
    }
    const PreparedFold a = prepare_fold(ds, plan, true, config);
    const PreparedFold b = prepare_fold(tampered, plan, true, config);
    CHECK(a.train.classical == b.train.classical);
    CHECK(a.train.quantum == b.train.quantum);
    CHECK(a.monitor.classical == b.monitor.classical);
    CHECK(a.test.classical != b.test.classical);

    const ModelEntry entry{ModelKind::kEarlyFusion, std::nullopt, 0};
    const SeedTree seeds = seed_everything(5).child("leak");
    const FoldResult ra = run_fold(a, entry, 0, ds.num_classes(), config, seeds);
    const FoldResult rb = run_fold(b, entry, 0, ds.num_classes(), config, seeds);
    REQUIRE(ra.ok);
    REQUIRE(rb.ok);
    REQUIRE(ra.training.history.size() == rb.training.history.size());
    for (std::size_t e = 0; e < ra.training.history.size(); ++e) {
        CHECK(ra.training.history[e].train_loss == rb.training.history[e].train_loss);
    }
    CHECK(ra.metrics.accuracy != rb.metrics.accuracy);
}

TEST_CASE("benchmark smoke run on wine", "[bench][smoke]") {
    if (!have_wine()) {
        SKIP("wine.csv not present in " << kDataDir);
    }
    const fs::path out = scratch_dir("smoke");
    RunConfig config = parse_config(minimal_config());
    config.data_dir = kDataDir;
    config.output_dir = out;
    config.models.push_back({ModelKind::kQuantumOnly, std::nullopt, 0});
    const auto outcome = run_benchmark(config, nullptr);
    CHECK(outcome.failed_jobs == 0);
    REQUIRE(outcome.runs.size() == 3);

    for (const auto &run : outcome.runs) {
        const fs::path file = out / "wine" / (run.model + ".json");
        REQUIRE(fs::exists(file));
        CHECK(fs::exists(out / "wine" / (run.model + "_history.csv")));
        std::ifstream in(file);
        const json doc = json::parse(in);
        for (const char *key : {"dataset", "model", "folds", "mean", "std", "seed", "config_hash"}) {
            CHECK(doc.contains(key));
        }
        CHECK(doc.at("folds").size() == 2);
        for (const auto &metric : qfusion::metrics::kMetricNames) {
            CHECK(doc.at("mean").contains(std::string(metric)));
        }
        const RunReport back = report_from_json(doc);
        const RunReport direct = run.report(config.seed);
        CHECK_THAT(back.summary("f1").mean,
                   Catch::Matchers::WithinAbs(direct.summary("f1").mean, 1e-12));
    }
    CHECK(fs::exists(out / "results.csv"));

    emit_summary(out, out);
    CHECK(fs::exists(out / "summary.md"));
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "accuracy.svg"));
    CHECK(load_results(out).size() == 3);
    fs::remove_all(out);
    CHECK_THROWS_AS(load_results(out), qfusion::DataError);
}
