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
 * @file trainer.hpp
 * Mini-batch training of one model on one fold with early stopping on a
 * monitor split, and batched prediction.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qfusion/metrics/metrics.hpp"
#include "qfusion/models/model.hpp"
#include "qfusion/training/loss.hpp"
#include "qfusion/training/optim.hpp"

namespace qfusion::training {

enum class MonitorMetric { kMacroF1, kLoss };

struct TrainOptions {
    std::size_t epochs = 30;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    AdamWConfig adamw{};
    double warmup_fraction = 0.10;
    double min_lr_ratio = 0.10;
    double max_grad_norm = 1.0;
    double label_smoothing = 0.05;
    std::size_t patience = 7;
    double min_delta = 1e-4;
    MonitorMetric monitor = MonitorMetric::kMacroF1;
    bool restore_best = true;

    void validate() const;
};

inline void TrainOptions::validate() const {
    if (epochs < 1 || batch_size < 1) {
        throw ConfigError("epochs and batch size must be positive");
    }
    if (!(learning_rate > 0.0) || !(max_grad_norm > 0.0)) {
        throw ConfigError("learning rate and max grad norm must be positive");
    }
    if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0) ||
        !(min_lr_ratio >= 0.0 && min_lr_ratio <= 1.0)) {
        throw ConfigError("warmup fraction and min lr ratio must lie in [0, 1]");
    }
}

/// Rows of one split: classical and quantum features plus labels.
template <typename Scalar> struct SplitData {
    Matrix<Scalar> classical;
    Matrix<Scalar> quantum;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double monitor_metric = std::nan("");
    double lr = 0.0;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    std::size_t epochs_ran = 0;
    std::size_t best_epoch = 0;
    double best_metric = std::nan("");
    bool early_stopped = false;
};

struct Predictions {
    Eigen::MatrixXd probabilities;  // N x C
    std::vector<int> labels;
    double loss = 0.0;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> gather_rows(const Matrix<Scalar> &m, std::span<const std::size_t> rows) {
    Matrix<Scalar> out(static_cast<Eigen::Index>(rows.size()), m.cols());
    if (m.cols() == 0) {
        return out;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

template <typename Scalar> Tensor<Scalar> as_input(const Matrix<Scalar> &m) {
    return m.cols() == 0 ? Tensor<Scalar>{} : Tensor<Scalar>::constant(m);
}

} // namespace detail

/// Class probabilities (sigmoid for one logit, softmax otherwise), arg-max
/// labels (threshold 0.5 for binary) and the mean loss, in eval mode.
template <typename Scalar>
Predictions predict(const models::Model<Scalar> &model, const SplitData<Scalar> &data,
                    double label_smoothing = 0.0) {
    autodiff::ForwardContext ctx;
    const Tensor<Scalar> logits =
        model.forward(detail::as_input(data.classical), detail::as_input(data.quantum), ctx);
    Predictions out;
    const auto n = logits.rows();
    const auto c = static_cast<Eigen::Index>(model.spec().num_classes);
    out.probabilities.resize(n, c);
    out.labels.resize(static_cast<std::size_t>(n));
    const Eigen::MatrixXd l = logits.value().template cast<double>();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (l.cols() == 1) {
            const double p = 1.0 / (1.0 + std::exp(-l(i, 0)));
            out.probabilities(i, 0) = 1.0 - p;
            out.probabilities(i, 1) = p;
            out.labels[static_cast<std::size_t>(i)] = l(i, 0) > 0.0 ? 1 : 0;
        } else {
            const Eigen::RowVectorXd e = (l.row(i).array() - l.row(i).maxCoeff()).exp();
            out.probabilities.row(i) = e / e.sum();
            Eigen::Index arg = 0;
            l.row(i).maxCoeff(&arg);
            out.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        }
    }
    if (!data.labels.empty()) {
        out.loss = static_cast<double>(classification_loss(logits, data.labels, label_smoothing).item());
    }
    return out;
}

/// Value tracked for early stopping on `monitor`.
template <typename Scalar>
double monitor_value(const models::Model<Scalar> &model, const SplitData<Scalar> &monitor,
                     const TrainOptions &options) {
    const auto pred = predict(model, monitor, options.label_smoothing);
    if (options.monitor == MonitorMetric::kLoss) {
        return pred.loss;
    }
    return metrics::macro_prf1(pred.labels, monitor.labels, model.spec().num_classes).f1;
}

/**
 * Train for up to `epochs` epochs over shuffled mini-batches (the last
 * partial batch is kept). The schedule spans epochs * ceil(n / batch)
 * updates regardless of early stopping. With a monitor split the best
 * epoch's parameters are restored at the end; without one all epochs run.
 */
template <typename Scalar>
TrainResult train_model(models::Model<Scalar> &model, const SplitData<Scalar> &train,
                        const SplitData<Scalar> *monitor, const TrainOptions &options,
                        std::uint64_t seed) {
    options.validate();
    if (train.size() == 0) {
        throw DataError("train_model: empty training split");
    }
    const bool monitored = monitor != nullptr && monitor->size() > 0;
    const std::size_t n = train.size();
    const std::size_t batches = (n + options.batch_size - 1) / options.batch_size;
    const auto schedule = WarmupCosineSchedule::make(options.learning_rate, options.epochs * batches,
                                                     options.warmup_fraction, options.min_lr_ratio);
    auto params = model.parameters();
    AdamW<Scalar> optimizer(params, options.adamw);
    EarlyStopping stopper(options.patience, options.min_delta, options.monitor == MonitorMetric::kMacroF1);
    std::vector<Matrix<Scalar>> best_snapshot;

    std::mt19937_64 shuffle_rng(seed);
    std::mt19937_64 dropout_rng(seed ^ 0xD1B54A32D192ED03ULL);
    autodiff::ForwardContext train_ctx{true, &dropout_rng};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        double lr = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t start = b * options.batch_size;
            const std::size_t stop = std::min(n, start + options.batch_size);
            const std::span<const std::size_t> rows(order.data() + start, stop - start);
            std::vector<int> labels;
            labels.reserve(rows.size());
            for (std::size_t r : rows) {
                labels.push_back(train.labels[r]);
            }
            optimizer.zero_grad();
            const Tensor<Scalar> logits =
                model.forward(detail::as_input(detail::gather_rows(train.classical, rows)),
                              detail::as_input(detail::gather_rows(train.quantum, rows)), train_ctx);
            const Tensor<Scalar> loss = classification_loss(logits, labels, options.label_smoothing);
            autodiff::backward(loss);
            clip_grad_norm(params, options.max_grad_norm);
            lr = schedule.at(optimizer.steps() + 1);
            optimizer.step(lr);
            loss_sum += static_cast<double>(loss.item()) * static_cast<double>(rows.size());
        }

        EpochRecord record{epoch, loss_sum / static_cast<double>(n), std::nan(""), lr};
        result.epochs_ran = epoch;
        if (monitored) {
            record.monitor_metric = monitor_value(model, *monitor, options);
            if (stopper.update(record.monitor_metric, epoch) && options.restore_best) {
                best_snapshot = model.snapshot();
            }
        }
        result.history.push_back(record);
        if (monitored && stopper.should_stop()) {
            result.early_stopped = epoch < options.epochs;
            break;
        }
    }
    if (monitored) {
        result.best_epoch = stopper.best_epoch();
        result.best_metric = stopper.best();
        if (options.restore_best && !best_snapshot.empty()) {
            model.restore(best_snapshot);
        }
    } else {
        result.best_epoch = result.epochs_ran;
    }
    return result;
}

} // namespace qfusion::training
