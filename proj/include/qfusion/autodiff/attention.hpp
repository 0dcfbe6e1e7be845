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

#include <string>
#include <vector>

#include "qfusion/autodiff/layers.hpp"

namespace qfusion::autodiff {

/**
 * Pre-norm Transformer encoder block over packed sequences:
 *
 *   T'  = T  + Drop(W_o MHSA(LN_1(T)))
 *   T'' = T' + Drop(FFN(LN_2(T'))),   FFN = Linear(D, 4D) -> GELU -> Linear(4D, D)
 *
 * Inputs are (B * seq_len) x D with each sample's tokens in consecutive rows.
 */
template <typename Scalar> class TransformerBlock {
  public:
    static constexpr int kFeedForwardExpansion = 4;

    TransformerBlock() = default;
    TransformerBlock(Eigen::Index width, Eigen::Index heads, double dropout, Rng &rng)
        : heads_(heads), dropout_(dropout) {
        if (heads < 1 || width % heads != 0) {
            throw ConfigError("attention width " + std::to_string(width) +
                              " not divisible by head count " + std::to_string(heads));
        }
        norm_attn_ = LayerNorm<Scalar>(width);
        query_ = Linear<Scalar>(width, width, rng);
        key_ = Linear<Scalar>(width, width, rng);
        value_ = Linear<Scalar>(width, width, rng);
        output_ = Linear<Scalar>(width, width, rng);
        norm_ffn_ = LayerNorm<Scalar>(width);
        ffn_in_ = Linear<Scalar>(width, kFeedForwardExpansion * width, rng);
        ffn_out_ = Linear<Scalar>(kFeedForwardExpansion * width, width, rng);
    }

    [[nodiscard]] Tensor<Scalar>
    operator()(const Tensor<Scalar> &tokens, Eigen::Index seq_len, const ForwardContext &ctx,
               std::vector<Matrix<Scalar>> *attention_weights = nullptr) const {
        const Tensor<Scalar> normed = norm_attn_(tokens);
        Tensor<Scalar> attended = scaled_dot_product_attention(
            query_(normed), key_(normed), value_(normed), seq_len, heads_, attention_weights);
        Tensor<Scalar> branch = maybe_dropout(output_(attended), ctx);
        const Tensor<Scalar> mid = add(tokens, branch);

        Tensor<Scalar> ff = ffn_out_(gelu(ffn_in_(norm_ffn_(mid))));
        return add(mid, maybe_dropout(ff, ctx));
    }

    [[nodiscard]] Eigen::Index heads() const { return heads_; }

    Linear<Scalar> &query() { return query_; }
    Linear<Scalar> &key() { return key_; }
    Linear<Scalar> &value() { return value_; }
    Linear<Scalar> &output() { return output_; }
    Linear<Scalar> &ffn_in() { return ffn_in_; }
    Linear<Scalar> &ffn_out() { return ffn_out_; }

    void collect(std::vector<Tensor<Scalar>> &out) const {
        norm_attn_.collect(out);
        query_.collect(out);
        key_.collect(out);
        value_.collect(out);
        output_.collect(out);
        norm_ffn_.collect(out);
        ffn_in_.collect(out);
        ffn_out_.collect(out);
    }

  private:
    Tensor<Scalar> maybe_dropout(const Tensor<Scalar> &x, const ForwardContext &ctx) const {
        if (ctx.training && dropout_ > 0.0) {
            return dropout(x, dropout_, true, *ctx.rng);
        }
        return x;
    }

    Eigen::Index heads_ = 1;
    double dropout_ = 0.0;
    LayerNorm<Scalar> norm_attn_;
    Linear<Scalar> query_, key_, value_, output_;
    LayerNorm<Scalar> norm_ffn_;
    Linear<Scalar> ffn_in_, ffn_out_;
};

} // namespace qfusion::autodiff
