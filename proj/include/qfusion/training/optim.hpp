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
 * @file optim.hpp
 * AdamW, the warmup + cosine learning-rate schedule, global-norm gradient
 * clipping and early stopping.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "qfusion/autodiff/tensor.hpp"

namespace qfusion::training {

using autodiff::Matrix;
using autodiff::Tensor;

struct AdamWConfig {
    double weight_decay = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam with decoupled weight decay:
///   p <- p - lr wd p;  p <- p - lr m̂ / (sqrt(v̂) + eps)
template <typename Scalar> class AdamW {
  public:
    AdamW(std::vector<Tensor<Scalar>> params, AdamWConfig config = {})
        : params_(std::move(params)), config_(config) {
        for (const auto &p : params_) {
            m_.push_back(Matrix<Scalar>::Zero(p.rows(), p.cols()));
            v_.push_back(Matrix<Scalar>::Zero(p.rows(), p.cols()));
        }
    }

    void step(double lr) {
        ++step_;
        const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
        const auto b1 = static_cast<Scalar>(config_.beta1);
        const auto b2 = static_cast<Scalar>(config_.beta2);
        for (std::size_t i = 0; i < params_.size(); ++i) {
            auto &value = params_[i].mutable_value();
            const auto &grad = params_[i].grad();
            if (config_.weight_decay != 0.0) {
                value *= static_cast<Scalar>(1.0 - lr * config_.weight_decay);
            }
            m_[i] = b1 * m_[i] + (Scalar(1) - b1) * grad;
            v_[i] = b2 * v_[i] + (Scalar(1) - b2) * grad.cwiseAbs2();
            value.array() -= static_cast<Scalar>(lr / bc1) * m_[i].array() /
                             ((v_[i].array() / static_cast<Scalar>(bc2)).sqrt() +
                              static_cast<Scalar>(config_.eps));
        }
    }

    void zero_grad() { autodiff::zero_grad(params_); }
    [[nodiscard]] std::size_t steps() const { return step_; }
    [[nodiscard]] const std::vector<Tensor<Scalar>> &parameters() const { return params_; }

  private:
    std::vector<Tensor<Scalar>> params_;
    AdamWConfig config_;
    std::vector<Matrix<Scalar>> m_;
    std::vector<Matrix<Scalar>> v_;
    std::size_t step_ = 0;
};

/// Linear warmup over ceil(warmup_fraction * total) steps, then cosine decay
/// to min_ratio * base at `total`.
struct WarmupCosineSchedule {
    double base_lr = 1e-3;
    std::size_t total_steps = 1;
    std::size_t warmup_steps = 1;
    double min_lr = 1e-4;

    static WarmupCosineSchedule make(double base_lr, std::size_t total_steps,
                                     double warmup_fraction = 0.10, double min_ratio = 0.10) {
        WarmupCosineSchedule s;
        s.base_lr = base_lr;
        s.total_steps = std::max<std::size_t>(1, total_steps);
        s.warmup_steps = static_cast<std::size_t>(
            std::ceil(warmup_fraction * static_cast<double>(s.total_steps) - 1e-9));
        s.min_lr = min_ratio * base_lr;
        return s;
    }

    /// Rate for optimizer update number `step` (1-based; 0 gives 0 while
    /// warming up).
    [[nodiscard]] double at(std::size_t step) const {
        if (step < warmup_steps) {
            return base_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
        }
        if (total_steps <= warmup_steps) {
            return step >= total_steps ? min_lr : base_lr;
        }
        const double progress = std::min(
            1.0, static_cast<double>(step - warmup_steps) / static_cast<double>(total_steps - warmup_steps));
        return min_lr + 0.5 * (base_lr - min_lr) * (1.0 + std::cos(std::numbers::pi * progress));
    }
};

/// Scale every gradient by max_norm / ||g|| when the global L2 norm exceeds
/// max_norm. Returns the norm before clipping.
template <typename Scalar>
double clip_grad_norm(const std::vector<Tensor<Scalar>> &params, double max_norm) {
    double sq = 0.0;
    for (const auto &p : params) {
        sq += p.grad().template cast<double>().squaredNorm();
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const auto factor = static_cast<Scalar>(max_norm / norm);
        for (auto p : params) {
            p.mutable_grad() *= factor;
        }
    }
    return norm;
}

/// Patience counter on a monitored quantity.
class EarlyStopping {
  public:
    EarlyStopping(std::size_t patience, double min_delta, bool maximize)
        : patience_(patience), min_delta_(min_delta), maximize_(maximize),
          best_(maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity()) {}

    /// Record the value after `epoch` (1-based); true when it is a new best.
    bool update(double value, std::size_t epoch) {
        const bool improved = maximize_ ? value > best_ + min_delta_ : value < best_ - min_delta_;
        if (improved) {
            best_ = value;
            best_epoch_ = epoch;
            since_ = 0;
        } else {
            ++since_;
        }
        return improved;
    }

    [[nodiscard]] bool should_stop() const { return since_ >= patience_; }
    [[nodiscard]] double best() const { return best_; }
    [[nodiscard]] std::size_t best_epoch() const { return best_epoch_; }
    [[nodiscard]] std::size_t epochs_since_improvement() const { return since_; }

  private:
    std::size_t patience_;
    double min_delta_;
    bool maximize_;
    double best_;
    std::size_t best_epoch_ = 0;
    std::size_t since_ = 0;
};

} // namespace qfusion::training
