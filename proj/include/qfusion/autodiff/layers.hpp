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
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qfusion/autodiff/ops.hpp"

namespace qfusion::autodiff {

using Rng = std::mt19937_64;

/// Per-forward settings shared by every layer of a model.
struct ForwardContext {
    bool training = false;
    Rng *rng = nullptr;
};

template <typename Scalar>
Matrix<Scalar> uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng &rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix<Scalar> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = static_cast<Scalar>(dist(rng));
    }
    return m;
}

/// Affine map y = x Wᵀ + b with W (out x in) and b (1 x out).
template <typename Scalar> class Linear {
  public:
    Linear() = default;
    /// Weights ~ U(-1/sqrt(in), 1/sqrt(in)), bias zero.
    Linear(Eigen::Index in, Eigen::Index out, Rng &rng)
        : weight_(Tensor<Scalar>::parameter(
              uniform_matrix<Scalar>(out, in, 1.0 / std::sqrt(static_cast<double>(in)), rng))),
          bias_(Tensor<Scalar>::parameter(Matrix<Scalar>::Zero(1, out))) {}

    [[nodiscard]] Tensor<Scalar> operator()(const Tensor<Scalar> &x) const {
        return linear(x, weight_, bias_);
    }

    [[nodiscard]] Eigen::Index in_features() const { return weight_.cols(); }
    [[nodiscard]] Eigen::Index out_features() const { return weight_.rows(); }

    Tensor<Scalar> &weight() { return weight_; }
    Tensor<Scalar> &bias() { return bias_; }
    [[nodiscard]] const Tensor<Scalar> &weight() const { return weight_; }
    [[nodiscard]] const Tensor<Scalar> &bias() const { return bias_; }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        out.push_back(weight_);
        out.push_back(bias_);
    }

  private:
    Tensor<Scalar> weight_;
    Tensor<Scalar> bias_;
};

template <typename Scalar> class LayerNorm {
  public:
    LayerNorm() = default;
    explicit LayerNorm(Eigen::Index width)
        : gain_(Tensor<Scalar>::parameter(Matrix<Scalar>::Ones(1, width))),
          bias_(Tensor<Scalar>::parameter(Matrix<Scalar>::Zero(1, width))) {}

    [[nodiscard]] Tensor<Scalar> operator()(const Tensor<Scalar> &x) const {
        return layer_norm(x, gain_, bias_);
    }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        out.push_back(gain_);
        out.push_back(bias_);
    }

  private:
    Tensor<Scalar> gain_;
    Tensor<Scalar> bias_;
};

/// Linear -> [LayerNorm] -> GELU -> Dropout.
template <typename Scalar> class MlpBlock {
  public:
    MlpBlock() = default;
    MlpBlock(Eigen::Index in, Eigen::Index out, bool normalize, double dropout, Rng &rng)
        : linear_(in, out, rng), dropout_(dropout), normalize_(normalize) {
        if (normalize_) {
            norm_ = LayerNorm<Scalar>(out);
        }
    }

    [[nodiscard]] Tensor<Scalar> operator()(const Tensor<Scalar> &x,
                                            const ForwardContext &ctx) const {
        Tensor<Scalar> h = linear_(x);
        if (normalize_) {
            h = norm_(h);
        }
        h = gelu(h);
        if (ctx.training && dropout_ > 0.0) {
            h = dropout(h, dropout_, true, *ctx.rng);
        }
        return h;
    }

    Linear<Scalar> &linear() { return linear_; }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        linear_.collect(out);
        if (normalize_) {
            norm_.collect(out);
        }
    }

  private:
    Linear<Scalar> linear_;
    LayerNorm<Scalar> norm_;
    double dropout_ = 0.0;
    bool normalize_ = false;
};

/// A stack of `depth` MlpBlocks, the first mapping `in` to `width`.
template <typename Scalar> class MlpTrunk {
  public:
    MlpTrunk() = default;
    MlpTrunk(Eigen::Index in, Eigen::Index width, int depth, bool normalize, double dropout,
             Rng &rng) {
        blocks_.reserve(static_cast<std::size_t>(depth));
        for (int i = 0; i < depth; ++i) {
            blocks_.emplace_back(i == 0 ? in : width, width, normalize, dropout, rng);
        }
    }

    [[nodiscard]] Tensor<Scalar> operator()(Tensor<Scalar> x, const ForwardContext &ctx) const {
        for (const auto &block : blocks_) {
            x = block(x, ctx);
        }
        return x;
    }

    [[nodiscard]] std::size_t depth() const { return blocks_.size(); }
    MlpBlock<Scalar> &block(std::size_t i) { return blocks_.at(i); }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        for (const auto &block : blocks_) {
            block.collect(out);
        }
    }

  private:
    std::vector<MlpBlock<Scalar>> blocks_;
};

} // namespace qfusion::autodiff
