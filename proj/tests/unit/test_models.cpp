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
#include <numeric>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "qfusion/models/model.hpp"
#include "qfusion/training/trainer.hpp"
#include "support/gradcheck.hpp"

using namespace qfusion::models;
using qfusion::autodiff::ForwardContext;
using qfusion::autodiff::Rng;
using qfusion::testing::check_gradients;
using qfusion::testing::random_matrix;
using Catch::Matchers::WithinAbs;

using T = qfusion::autodiff::Tensor<double>;
using M = qfusion::autodiff::Matrix<double>;

namespace {
ModelSpec small_spec(ModelKind kind, std::size_t classes = 3, std::size_t qubits = 3) {
    ModelSpec spec;
    spec.kind = kind;
    spec.classical_dim = 4;
    spec.num_classes = classes;
    spec.width = 8;
    spec.heads = 2;
    spec.circuit = qfusion::quantum::CircuitConfig{qubits, 2};
    return spec;
}

struct Inputs {
    T xc;
    T xq;
};

Inputs random_inputs(Eigen::Index n, Eigen::Index d, Eigen::Index q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return {T::constant(random_matrix(n, d, rng, -1.5, 1.5)), T::constant(random_matrix(n, q, rng, -1.5, 1.5))};
}

void zero(qfusion::autodiff::Linear<double> &layer) {
    layer.weight().mutable_value().setZero();
    layer.bias().mutable_value().setZero();
}

std::size_t count(const std::vector<T> &params) {
    std::size_t n = 0;
    for (const auto &p : params) {
        n += static_cast<std::size_t>(p.size());
    }
    return n;
}
} // namespace

TEST_CASE("model kinds and specs", "[models][spec]") {
    CHECK(parse_model_kind("classical_deep") == ModelKind::kBestClassical);
    CHECK(parse_model_kind("quantum_deep_head") == ModelKind::kQuantumDeep);
    for (const auto kind : kAllModelKinds) {
        CHECK(parse_model_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_model_kind("hybrid"), qfusion::ConfigError);
    CHECK(default_depth(ModelKind::kDeepFusion) == 3);
    CHECK(default_depth(ModelKind::kVeryDeepFusion) == 4);
    CHECK_FALSE(default_classical_pca(ModelKind::kEarlyFusion));
    auto spec = small_spec(ModelKind::kMidfusionAttn);
    spec.heads = 3;
    CHECK_THROWS_AS(spec.validate(), qfusion::ConfigError);
    CHECK(small_spec(ModelKind::kClassical, 2).outputs() == 1);
    CHECK(small_spec(ModelKind::kClassical, 3).outputs() == 3);
}

TEST_CASE("classical model", "[models][classical]") {
    Rng rng(1);
    ClassicalModel<double> model(small_spec(ModelKind::kClassical), rng);
    const auto in = random_inputs(5, 4, 3, 2);
    ForwardContext ctx;
    CHECK(model.forward(in.xc, T{}, ctx).cols() == 3);
    zero(model.head());
    CHECK(model.forward(in.xc, T{}, ctx).value().isZero(0.0));

    Rng rng2(3);
    ClassicalModel<double> fresh(small_spec(ModelKind::kBestClassical), rng2);
    std::vector<int> labels{0, 1, 2, 0, 1};
    qfusion::autodiff::backward(qfusion::training::classification_loss(fresh.forward(in.xc, T{}, ctx), labels, 0.05));
    CHECK(fresh.trunk().block(0).linear().weight().grad().norm() > 0.0);
    CHECK(fresh.trunk().depth() == 3);
}

TEST_CASE("quantum-only model", "[models][quantum]") {
    Rng rng(4);
    auto spec = small_spec(ModelKind::kQuantumOnly, 2, 9);
    QuantumModel<double> model(spec, rng);
    CHECK(model.circuit().readout_size() == 18);
    const auto in = random_inputs(3, 4, 9, 5);
    ForwardContext ctx;
    model.head().weight().mutable_value().setZero();
    model.head().bias().mutable_value().setConstant(0.25);
    const M logits = model.forward(T{}, in.xq, ctx).value();
    CHECK(logits.cols() == 1);
    CHECK((logits.array() == 0.25).all());

    Rng rng2(6);
    QuantumModel<double> fresh(small_spec(ModelKind::kQuantumOnly), rng2);
    std::mt19937_64 w(7);
    fresh.circuit().weights().mutable_value() = random_matrix(6, 3, w, -3.0, 3.0);
    const auto in3 = random_inputs(4, 4, 3, 8);
    qfusion::autodiff::backward(qfusion::autodiff::sum(fresh.forward(T{}, in3.xq, ctx)));
    CHECK(fresh.circuit().weights().grad().norm() > 0.0);
}

TEST_CASE("early fusion", "[models][early]") {
    Rng rng(9);
    auto spec = small_spec(ModelKind::kEarlyFusion);
    spec.classical_dim = 13;
    spec.circuit = qfusion::quantum::CircuitConfig{9, 1};
    EarlyFusionModel<double> model(spec, rng);
    auto &first = model.trunk().block(0).linear();
    CHECK(first.in_features() == 31);

    // With the quantum columns of the first layer zeroed the output ignores z.
    first.weight().mutable_value().rightCols(18).setZero();
    const auto a = random_inputs(3, 13, 9, 10);
    const auto b = random_inputs(3, 13, 9, 11);
    ForwardContext ctx;
    CHECK(model.forward(a.xc, a.xq, ctx).value() == model.forward(a.xc, b.xq, ctx).value());

    Rng rng2(12);
    EarlyFusionModel<double> fresh(small_spec(ModelKind::kEarlyFusion), rng2);
    const auto in = random_inputs(4, 4, 3, 13);
    qfusion::autodiff::backward(qfusion::autodiff::sum(fresh.forward(in.xc, in.xq, ctx)));
    const M g = fresh.trunk().block(0).linear().weight().grad();
    CHECK(g.leftCols(4).norm() > 0.0);
    CHECK(g.rightCols(6).norm() > 0.0);
    CHECK(fresh.circuit().weights().grad().norm() > 0.0);
}

TEST_CASE("late fusion gate", "[models][late]") {
    Rng rng(14);
    LateFusionModel<double> model(small_spec(ModelKind::kLateFusion), rng);
    const auto in = random_inputs(4, 4, 3, 15);
    ForwardContext ctx;
    const M lc = model.classical_logits(in.xc, ctx).value();
    const M lq = model.quantum_logits(in.xq).value();
    CHECK((model.forward(in.xc, in.xq, ctx).value() - 0.5 * (lc + lq)).cwiseAbs().maxCoeff() < 1e-15);
    model.gate().mutable_value()(0, 0) = 40.0;
    CHECK((model.forward(in.xc, in.xq, ctx).value() - lc).cwiseAbs().maxCoeff() < 1e-12);

    const T same = T::constant(lc);
    for (double a : {-5.0, 0.0, 3.0}) {
        const M mixed = qfusion::autodiff::gate_mix(T::constant(M::Constant(1, 1, a)), same, same).value();
        CHECK((mixed - lc).cwiseAbs().maxCoeff() < 1e-15);
    }
    for (double a : {-700.0, -30.0, 0.0, 30.0, 700.0}) {
        const double alpha = qfusion::autodiff::sigmoid(T::constant(M::Constant(1, 1, a))).value()(0, 0);
        CHECK(alpha >= 0.0);
        CHECK(alpha <= 1.0);
    }
    CHECK(qfusion::autodiff::sigmoid(T::constant(M::Constant(1, 1, 30.0))).value()(0, 0) < 1.0);
}

TEST_CASE("linear mid fusion", "[models][midfusion]") {
    Rng rng(16);
    LatentFusionModel<double> model(small_spec(ModelKind::kMidfusionLinear), rng);
    std::mt19937_64 r(17);
    model.gate().mutable_value()(0, 0) = 0.4;
    model.classical_projection().weight().mutable_value().setZero();
    model.quantum_projection().weight().mutable_value().setZero();
    const M bc = random_matrix(1, 8, r);
    const M bq = random_matrix(1, 8, r);
    model.classical_projection().bias().mutable_value() = bc;
    model.quantum_projection().bias().mutable_value() = bq;
    const auto in = random_inputs(3, 4, 3, 18);
    ForwardContext ctx;
    const double alpha = 1.0 / (1.0 + std::exp(-0.4));
    const M h = alpha * bc + (1.0 - alpha) * bq;
    const M expected = h * model.head().weight().value().transpose() + model.head().bias().value();
    const M logits = model.forward(in.xc, in.xq, ctx).value();
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK((logits.row(i) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }

    Rng rng2(19);
    LatentFusionModel<double> fresh(small_spec(ModelKind::kMidfusionLinear), rng2);
    qfusion::autodiff::backward(qfusion::autodiff::sum(fresh.forward(in.xc, in.xq, ctx)));
    CHECK(std::abs(fresh.gate().grad()(0, 0)) > 0.0);
}

TEST_CASE("deep fusion trunks", "[models][deep]") {
    Rng a(20), b(20);
    LatentFusionModel<double> k3(small_spec(ModelKind::kDeepFusion), a);
    LatentFusionModel<double> k4(small_spec(ModelKind::kVeryDeepFusion), b);
    // one extra Linear(8, 8) + LayerNorm(8) block
    CHECK(k4.num_parameters() - k3.num_parameters() == 8 * 8 + 8 + 2 * 8);
    CHECK(k3.classical_trunk().depth() == 3);
    CHECK(k4.classical_trunk().depth() == 4);

    const auto in = random_inputs(4, 4, 3, 21);
    ForwardContext ctx;
    qfusion::autodiff::backward(qfusion::autodiff::sum(k4.forward(in.xc, in.xq, ctx)));
    CHECK(k4.classical_trunk().block(0).linear().weight().grad().norm() > 0.0);
    CHECK(k4.classical_trunk().block(3).linear().weight().grad().norm() > 0.0);
}

TEST_CASE("attention mid fusion", "[models][attention]") {
    Rng rng(22);
    auto spec = small_spec(ModelKind::kMidfusionAttn, 3, 9);
    spec.width = 16;
    spec.heads = 4;
    AttentionFusionModel<double> model(spec, rng);
    const auto in = random_inputs(2, 4, 9, 23);
    ForwardContext ctx;
    std::vector<M> attention;
    std::mt19937_64 r(24);
    const T z = T::constant(random_matrix(2, 18, r));
    (void)model.forward_from_readout(in.xc, z, ctx, &attention);
    REQUIRE(attention.size() == 2 * 4);
    CHECK(attention[0].rows() == 19);
    CHECK(attention[0].cols() == 19);

    SECTION("permuting quantum tokens with their embeddings keeps the CLS logits") {
        std::vector<Eigen::Index> perm(18);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), r);
        M zp(2, 18);
        M ep(18, 16);
        const M e = model.identity_embeddings().value();
        for (Eigen::Index j = 0; j < 18; ++j) {
            zp.col(j) = z.value().col(perm[static_cast<std::size_t>(j)]);
            ep.row(j) = e.row(perm[static_cast<std::size_t>(j)]);
        }
        const M before = model.forward_from_readout(in.xc, z, ctx).value();
        model.identity_embeddings().mutable_value() = ep;
        const M after = model.forward_from_readout(in.xc, T::constant(zp), ctx).value();
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-5);
    }
    SECTION("zeroed value and output projections leave only the CLS residual path") {
        zero(model.block().value());
        zero(model.block().output());
        const M a = model.forward_from_readout(in.xc, z, ctx).value();
        const M b = model.forward_from_readout(in.xc, T::constant(random_matrix(2, 18, r)), ctx).value();
        CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("eval forward is deterministic and argmax ignores logit shifts", "[models][property]") {
    const auto in = random_inputs(6, 4, 3, 25);
    for (const auto kind : kAllModelKinds) {
        Rng rng(26);
        auto model = make_model<double>(small_spec(kind), rng);
        ForwardContext ctx;
        const T xc = uses_classical(kind) ? in.xc : T{};
        const T xq = uses_quantum(kind) ? in.xq : T{};
        const M a = model->forward(xc, xq, ctx).value();
        const M b = model->forward(xc, xq, ctx).value();
        CHECK(a == b);
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            Eigen::Index arg = 0, shifted_arg = 0;
            a.row(i).maxCoeff(&arg);
            (a.row(i).array() + 123.25).maxCoeff(&shifted_arg);
            CHECK(arg == shifted_arg);
        }
    }
}

TEST_CASE("snapshot and restore", "[models]") {
    Rng rng(27);
    auto model = make_model<double>(small_spec(ModelKind::kMidfusionAttn), rng);
    const auto saved = model->snapshot();
    for (auto &p : model->parameters()) {
        p.mutable_value().array() += 1.0;
    }
    model->restore(saved);
    const auto now = model->snapshot();
    for (std::size_t i = 0; i < saved.size(); ++i) {
        CHECK(now[i] == saved[i]);
    }
    CHECK(count(model->parameters()) == model->num_parameters());
    CHECK_THROWS_AS(model->restore({}), qfusion::UsageError);
}

TEST_CASE("end-to-end gradients of every family", "[models][gradcheck]") {
    const auto in = random_inputs(3, 4, 3, 28);
    std::mt19937_64 r(29);
    const T probe = T::constant(random_matrix(3, 3, r));
    for (const auto kind : kAllModelKinds) {
        DYNAMIC_SECTION(to_string(kind)) {
            Rng rng(30);
            auto model = make_model<double>(small_spec(kind), rng);
            if (uses_quantum(kind)) {
                // Move the circuit weights (the only 6 x 3 tensor) away from zero.
                for (auto &p : model->parameters()) {
                    if (p.rows() == 6 && p.cols() == 3) {
                        p.mutable_value() = random_matrix(6, 3, r, -2.0, 2.0);
                    }
                }
            }
            for (auto &p : model->parameters()) {
                if (p.rows() == 1 && p.cols() == 1) {
                    p.mutable_value()(0, 0) = 0.3;  // gate away from 0
                }
            }
            ForwardContext ctx;
            const T xc = uses_classical(kind) ? in.xc : T{};
            const T xq = uses_quantum(kind) ? in.xq : T{};
            const auto result = check_gradients(model->parameters(), [&] {
                return qfusion::autodiff::sum(qfusion::autodiff::mul(model->forward(xc, xq, ctx), probe));
            });
            CHECK(result.max_relative_error < 1e-3);
        }
    }
}
