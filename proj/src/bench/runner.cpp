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
#include "qfusion/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qfusion/preprocessing/pca.hpp"
#include "qfusion/preprocessing/standardize.hpp"

namespace qfusion::bench {

using nlohmann::json;
using preprocessing::IndexList;
using MatrixD = preprocessing::RowMatrix<double>;

namespace {

MatrixD gather(const data::FeatureMatrix &x, const IndexList &rows) {
    MatrixD out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) =
            x.row(static_cast<Eigen::Index>(rows[i])).cast<double>();
    }
    return out;
}

std::vector<int> gather_labels(const std::vector<int> &y, const IndexList &rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        out.push_back(y[r]);
    }
    return out;
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double number_or_nan(const json &v) {
    return v.is_null() ? std::nan("") : v.get<double>();
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "";
    }
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

std::string history_csv(const ModelRun &run) {
    std::ostringstream os;
    os << "fold,epoch,train_loss,monitor_metric,lr\n";
    for (std::size_t k = 0; k < run.folds.size(); ++k) {
        for (const auto &rec : run.folds[k].training.history) {
            os << k << ',' << rec.epoch << ',' << format_double(rec.train_loss) << ','
               << format_double(rec.monitor_metric) << ',' << format_double(rec.lr) << '\n';
        }
    }
    return os.str();
}

std::string results_csv(const std::vector<ModelRun> &runs) {
    std::ostringstream os;
    os << "dataset,model,fold,status,accuracy,precision,recall,f1,roc_auc,epochs_ran\n";
    for (const auto &run : runs) {
        for (std::size_t k = 0; k < run.folds.size(); ++k) {
            const auto &f = run.folds[k];
            os << run.dataset << ',' << run.model << ',' << k << ',' << (f.ok ? "ok" : "failed");
            if (f.ok) {
                const auto &m = f.metrics;
                os << ',' << format_double(m.accuracy) << ',' << format_double(m.precision) << ','
                   << format_double(m.recall) << ',' << format_double(m.f1) << ','
                   << format_double(m.roc_auc) << ',' << m.epochs_ran;
            } else {
                os << ",,,,,,";
            }
            os << '\n';
        }
    }
    return os.str();
}

} // namespace

PreparedFold prepare_fold(const data::Dataset &ds, const preprocessing::FoldPlan &plan,
                          bool classical_pca, const RunConfig &config) {
    const MatrixD x_train = gather(ds.x, plan.train_idx);
    const auto scaler = preprocessing::fit_standardizer(x_train);
    const MatrixD s_train = preprocessing::transform(scaler, x_train);
    const MatrixD s_monitor = preprocessing::transform(scaler, gather(ds.x, plan.monitor_idx));
    const MatrixD s_test = preprocessing::transform(scaler, gather(ds.x, plan.test_idx));

    PreparedFold out;
    out.classical_dim = s_train.cols();
    out.qubits = std::min({config.qubits, ds.dim(), plan.train_idx.size()});

    const auto decomp = preprocessing::decompose(s_train);
    const auto quantum_fit = preprocessing::select_components<double>(
        decomp, preprocessing::PcaMode::n_components(out.qubits));
    const auto classical_fit = preprocessing::select_components<double>(
        decomp, preprocessing::PcaMode::variance(config.classical_variance));

    auto fill = [&](training::SplitData<float> &split, const MatrixD &s, const IndexList &rows) {
        split.labels = gather_labels(ds.y, rows);
        split.quantum = preprocessing::project(quantum_fit, s).cast<float>();
        if (classical_pca) {
            split.classical = preprocessing::project(classical_fit, s).cast<float>();
        } else {
            split.classical = s.cast<float>();
        }
    };
    fill(out.train, s_train, plan.train_idx);
    fill(out.monitor, s_monitor, plan.monitor_idx);
    fill(out.test, s_test, plan.test_idx);
    out.classical_retained = out.train.classical.cols();
    return out;
}

models::ModelSpec model_spec_for(const ModelEntry &entry, const PreparedFold &fold,
                                 std::size_t num_classes, const RunConfig &config) {
    models::ModelSpec spec;
    spec.kind = entry.kind;
    spec.classical_dim = fold.classical_retained;
    spec.num_classes = num_classes;
    spec.width = config.width;
    spec.heads = config.heads;
    spec.dropout = config.dropout;
    spec.depth = entry.depth;
    spec.circuit = quantum::CircuitConfig{fold.qubits, config.layers};
    return spec;
}

FoldResult run_fold(const PreparedFold &fold, const ModelEntry &entry, std::size_t fold_index,
                    std::size_t num_classes, const RunConfig &config, const SeedTree &seeds) {
    FoldResult result;
    const auto spec = model_spec_for(entry, fold, num_classes, config);
    autodiff::Rng init_rng(seeds.child("init").value());
    auto model = models::make_model<float>(spec, init_rng);

    // Branches a family does not use get zero-column inputs.
    auto view = [&](const training::SplitData<float> &split) {
        training::SplitData<float> v;
        v.labels = split.labels;
        v.classical = models::uses_classical(spec.kind) ? split.classical
                                                        : autodiff::Matrix<float>(split.size(), 0);
        v.quantum = models::uses_quantum(spec.kind) ? split.quantum
                                                    : autodiff::Matrix<float>(split.size(), 0);
        return v;
    };
    const auto train = view(fold.train);
    const auto monitor = view(fold.monitor);
    const auto test = view(fold.test);

    result.training = training::train_model(*model, train, monitor.size() > 0 ? &monitor : nullptr,
                                            config.train, seeds.child("train").value());
    const auto pred = training::predict(*model, test);

    auto &m = result.metrics;
    m.fold = fold_index;
    m.accuracy = metrics::accuracy(pred.labels, test.labels);
    const auto macro = metrics::macro_prf1(pred.labels, test.labels, num_classes);
    m.precision = macro.precision;
    m.recall = macro.recall;
    m.f1 = macro.f1;
    if (num_classes == 2) {
        std::vector<double> scores(test.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = pred.probabilities(static_cast<Eigen::Index>(i), 1);
        }
        m.roc_auc = metrics::roc_auc_binary(scores, test.labels);
    } else {
        m.roc_auc = metrics::roc_auc_ovr_macro(pred.probabilities, test.labels);
    }
    m.epochs_ran = result.training.epochs_ran;
    return result;
}

std::string model_label(const ModelEntry &entry) {
    std::string label = entry.name();
    if (entry.classical_pca && *entry.classical_pca != models::default_classical_pca(entry.kind)) {
        label += *entry.classical_pca ? "_pca" : "_nopca";
    }
    if (entry.depth > 0 && entry.depth != models::default_depth(entry.kind)) {
        label += "_k" + std::to_string(entry.depth);
    }
    return label;
}

std::size_t ModelRun::failures() const {
    return static_cast<std::size_t>(
        std::count_if(folds.begin(), folds.end(), [](const FoldResult &f) { return !f.ok; }));
}

metrics::RunReport ModelRun::report(std::uint64_t seed) const {
    std::vector<metrics::FoldMetrics> ok;
    for (const auto &f : folds) {
        if (f.ok) {
            ok.push_back(f.metrics);
        }
    }
    return metrics::aggregate_folds(dataset, model, seed, std::move(ok));
}

json run_to_json(const ModelRun &run, const RunConfig &config) {
    const auto report = run.report(config.seed);
    json doc;
    doc["dataset"] = run.dataset;
    doc["model"] = run.model;
    doc["folds"] = json::array();
    for (std::size_t k = 0; k < run.folds.size(); ++k) {
        const auto &f = run.folds[k];
        json item;
        item["fold"] = k;
        if (f.ok) {
            item["accuracy"] = number_or_null(f.metrics.accuracy);
            item["precision"] = number_or_null(f.metrics.precision);
            item["recall"] = number_or_null(f.metrics.recall);
            item["f1"] = number_or_null(f.metrics.f1);
            item["roc_auc"] = number_or_null(f.metrics.roc_auc);
            item["epochs_ran"] = f.metrics.epochs_ran;
        } else {
            item["status"] = "failed";
            item["error"] = f.error;
        }
        doc["folds"].push_back(item);
    }
    json mean = json::object();
    json std_dev = json::object();
    for (std::size_t i = 0; i < metrics::kMetricNames.size(); ++i) {
        const std::string name(metrics::kMetricNames[i]);
        mean[name] = number_or_null(report.summaries[i].mean);
        std_dev[name] = number_or_null(report.summaries[i].std);
    }
    doc["mean"] = mean;
    doc["std"] = std_dev;
    doc["seed"] = config.seed;
    doc["config_hash"] = config_hash(config);
    if (run.failures() > 0) {
        doc["failed_folds"] = run.failures();
    }
    return doc;
}

metrics::RunReport report_from_json(const json &doc) {
    try {
        std::vector<metrics::FoldMetrics> folds;
        for (const auto &item : doc.at("folds")) {
            if (item.contains("status") && item.at("status") != "ok") {
                continue;
            }
            metrics::FoldMetrics m;
            m.fold = item.at("fold").get<std::size_t>();
            m.accuracy = number_or_nan(item.at("accuracy"));
            m.precision = number_or_nan(item.at("precision"));
            m.recall = number_or_nan(item.at("recall"));
            m.f1 = number_or_nan(item.at("f1"));
            m.roc_auc = number_or_nan(item.at("roc_auc"));
            m.epochs_ran = item.value("epochs_ran", std::size_t{0});
            folds.push_back(m);
        }
        return metrics::aggregate_folds(doc.at("dataset").get<std::string>(),
                                        doc.at("model").get<std::string>(),
                                        doc.value("seed", std::uint64_t{0}), std::move(folds));
    } catch (const json::exception &e) {
        throw DataError(std::string("malformed results document: ") + e.what());
    }
}

BenchmarkOutcome run_benchmark(const RunConfig &config, std::ostream *log) {
    validate_config(config, true);
    const SeedTree root = seed_everything(config.seed);
    std::mutex log_mutex;
    auto say = [&](const std::string &line) {
        if (log != nullptr) {
            std::lock_guard lock(log_mutex);
            *log << line << std::endl;
        }
    };

    BenchmarkOutcome outcome;
    for (const auto &entry : config.datasets) {
        const SeedTree ds_seeds = root.child(entry.name);
        data::PresetOptions options{config.data_dir, entry.path, entry.max_samples,
                                    ds_seeds.child("subsample").value()};
        const data::Dataset ds = data::load_preset(entry.name, options);
        const auto plans = preprocessing::plan_folds(ds.y, config.folds, config.monitor_fraction,
                                                     ds_seeds.child("folds").value());
        say(entry.name + ": " + std::to_string(ds.size()) + " rows, " + std::to_string(ds.dim()) +
            " features, " + std::to_string(ds.num_classes()) + " classes, " +
            std::to_string(plans.size()) + " folds");

        // Fold inputs are shared by every model with the same PCA setting.
        std::map<bool, std::vector<PreparedFold>> prepared;
        for (const auto &m : config.models) {
            const bool pca = m.pca_enabled();
            if (!prepared.contains(pca)) {
                auto &folds = prepared[pca];
                for (const auto &plan : plans) {
                    folds.push_back(prepare_fold(ds, plan, pca, config));
                }
            }
        }

        std::vector<ModelRun> runs(config.models.size());
        for (std::size_t m = 0; m < runs.size(); ++m) {
            runs[m].dataset = entry.name;
            runs[m].model = model_label(config.models[m]);
            runs[m].folds.resize(plans.size());
        }

        const std::size_t jobs = runs.size() * plans.size();
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t job = next++; job < jobs; job = next++) {
                const std::size_t m = job / plans.size();
                const std::size_t k = job % plans.size();
                const auto &model_entry = config.models[m];
                const SeedTree seeds = ds_seeds.child(runs[m].model).child(k);
                FoldResult &slot = runs[m].folds[k];
                try {
                    slot = run_fold(prepared.at(model_entry.pca_enabled())[k], model_entry, k,
                                    ds.num_classes(), config, seeds);
                    std::ostringstream line;
                    line << entry.name << '/' << runs[m].model << " fold " << k << ": accuracy "
                         << std::fixed << std::setprecision(3) << slot.metrics.accuracy << " f1 "
                         << slot.metrics.f1 << " epochs " << slot.metrics.epochs_ran;
                    say(line.str());
                } catch (const std::exception &e) {
                    slot = FoldResult{};
                    slot.ok = false;
                    slot.error = e.what();
                    say(entry.name + '/' + runs[m].model + " fold " + std::to_string(k) +
                        " FAILED: " + e.what());
                }
            }
        };
        const std::size_t threads = std::max<std::size_t>(1, std::min(config.workers, jobs));
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t) {
                pool.emplace_back(worker);
            }
        }

        for (auto &run : runs) {
            const auto dir = config.output_dir / run.dataset;
            write_text(dir / (run.model + ".json"), run_to_json(run, config).dump(2) + "\n");
            write_text(dir / (run.model + "_history.csv"), history_csv(run));
            outcome.failed_jobs += run.failures();
            outcome.runs.push_back(std::move(run));
        }
        write_text(config.output_dir / "results.csv", results_csv(outcome.runs));
    }
    return outcome;
}

} // namespace qfusion::bench
