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
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "qfusion/autodiff/attention.hpp"
#include "support/gradcheck.hpp"

using namespace qfusion::autodiff;
using qfusion::testing::check_gradients;
using qfusion::testing::random_matrix;

using T = Tensor<double>;
using M = Matrix<double>;

TEST_CASE("single token attends to itself", "[attention]") {
    std::mt19937_64 rng(1);
    const T q = T::constant(random_matrix(1, 8, rng));
    const T k = T::constant(random_matrix(1, 8, rng));
    const T v = T::constant(random_matrix(1, 8, rng));
    std::vector<M> weights;
    const T out = scaled_dot_product_attention(q, k, v, 1, 4, &weights);
    CHECK(out.value() == v.value());
    REQUIRE(weights.size() == 4);
    for (const auto &w : weights) {
        CHECK(w(0, 0) == 1.0);
    }
}

TEST_CASE("single-token block keeps the residual path", "[attention]") {
    Rng rng(2);
    TransformerBlock<double> block(8, 4, 0.0, rng);
    std::mt19937_64 data(3);
    const T tokens = T::constant(random_matrix(1, 8, data));
    ForwardContext ctx;
    const M out = block(tokens, 1, ctx).value();

    // Attention over one key returns the value projection of LN(t) itself.
    const T normed = layer_norm(tokens, T::constant(M::Ones(1, 8)), T::constant(M::Zero(1, 8)));
    const T mid = add(tokens, block.output()(block.value()(normed)));
    const T ff = block.ffn_out()(gelu(block.ffn_in()(
        layer_norm(mid, T::constant(M::Ones(1, 8)), T::constant(M::Zero(1, 8))))));
    CHECK((out - add(mid, ff).value()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("identical tokens give uniform attention", "[attention]") {
    std::mt19937_64 rng(4);
    const M row = random_matrix(1, 8, rng);
    M tokens(5, 8);
    tokens.rowwise() = row.row(0);
    Rng init(5);
    TransformerBlock<double> block(8, 4, 0.0, init);
    std::vector<M> weights;
    ForwardContext ctx;
    (void)block(T::constant(tokens), 5, ctx, &weights);
    REQUIRE(weights.size() == 4);
    for (const auto &w : weights) {
        CHECK((w.array() - 0.2).abs().maxCoeff() < 1e-12);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            CHECK(std::abs(w.row(r).sum() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("attention rows are probability vectors", "[attention]") {
    std::mt19937_64 rng(6);
    std::vector<M> weights;
    (void)scaled_dot_product_attention(T::constant(random_matrix(12, 8, rng, -5, 5)),
                                       T::constant(random_matrix(12, 8, rng, -5, 5)),
                                       T::constant(random_matrix(12, 8, rng)), 4, 2, &weights);
    REQUIRE(weights.size() == 6);
    for (const auto &w : weights) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            CHECK(std::abs(w.row(r).sum() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("head count must divide the width", "[attention]") {
    Rng rng(7);
    CHECK_THROWS_AS(TransformerBlock<double>(10, 4, 0.0, rng), qfusion::ConfigError);
    std::mt19937_64 data(8);
    const T x = T::constant(random_matrix(2, 10, data));
    CHECK_THROWS_AS(scaled_dot_product_attention(x, x, x, 2, 4), qfusion::ConfigError);
}

TEST_CASE("CLS output gradient matches central differences", "[attention][gradcheck]") {
    std::mt19937_64 rng(9);
    Rng init(10);
    TransformerBlock<double> block(8, 4, 0.0, init);
    T tokens = T::parameter(random_matrix(5, 8, rng));
    const T probe = T::constant(random_matrix(1, 8, rng));
    ForwardContext ctx;
    std::vector<T> wrt{tokens};
    block.collect(wrt);
    const auto result = check_gradients(
        wrt, [&] { return sum(mul(take_rows(block(tokens, 5, ctx), 5, 0), probe)); });
    CHECK(result.max_relative_error < 1e-4);
}

TEST_CASE("batched sequences are independent", "[attention]") {
    std::mt19937_64 rng(11);
    Rng init(12);
    TransformerBlock<double> block(8, 2, 0.0, init);
    const M a = random_matrix(3, 8, rng);
    const M b = random_matrix(3, 8, rng);
    M both(6, 8);
    both << a, b;
    ForwardContext ctx;
    const M joint = block(T::constant(both), 3, ctx).value();
    const M alone = block(T::constant(b), 3, ctx).value();
    CHECK((joint.bottomRows(3) - alone).cwiseAbs().maxCoeff() < 1e-12);
}
