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
 * @file model.hpp
 * The model families. Every model maps a batch of classical rows (N x d_c)
 * and quantum rows (N x Q) to logits (N x 1 for binary tasks, N x C
 * otherwise). Families that ignore a branch accept an undefined tensor for it.
 */
#pragma once

#include <memory>
#include <vector>

#include "qfusion/autodiff/attention.hpp"
#include "qfusion/models/model_spec.hpp"
#include "qfusion/models/quantum_layer.hpp"

namespace qfusion::models {

using autodiff::ForwardContext;
using autodiff::Linear;
using autodiff::MlpTrunk;
using autodiff::Rng;

template <typename Scalar> class Model {
  public:
    explicit Model(ModelSpec spec) : spec_(std::move(spec)) {}
    virtual ~Model() = default;
    Model(const Model &) = delete;
    Model &operator=(const Model &) = delete;

    [[nodiscard]] virtual Tensor<Scalar> forward(const Tensor<Scalar> &classical,
                                                 const Tensor<Scalar> &quantum,
                                                 const ForwardContext &ctx) const = 0;
    virtual void collect(std::vector<Tensor<Scalar>> &out) const = 0;

    [[nodiscard]] std::vector<Tensor<Scalar>> parameters() const {
        std::vector<Tensor<Scalar>> out;
        collect(out);
        return out;
    }

    [[nodiscard]] std::size_t num_parameters() const {
        std::size_t n = 0;
        for (const auto &p : parameters()) {
            n += static_cast<std::size_t>(p.size());
        }
        return n;
    }

    /// Copy of every parameter value, in `parameters()` order.
    [[nodiscard]] std::vector<Matrix<Scalar>> snapshot() const {
        std::vector<Matrix<Scalar>> out;
        for (const auto &p : parameters()) {
            out.push_back(p.value());
        }
        return out;
    }

    void restore(const std::vector<Matrix<Scalar>> &values) {
        auto params = parameters();
        if (values.size() != params.size()) {
            throw UsageError("restore: snapshot holds " + std::to_string(values.size()) +
                             " tensors, model has " + std::to_string(params.size()));
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i].mutable_value() = values[i];
        }
    }

    [[nodiscard]] const ModelSpec &spec() const { return spec_; }

  protected:
    ModelSpec spec_;
};

/// ℓ = W_o g_c(x) + b_o
template <typename Scalar> class ClassicalModel final : public Model<Scalar> {
  public:
    ClassicalModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec),
          trunk_(spec.classical_dim, spec.width, spec.trunk_depth(),
                 spec.kind == ModelKind::kBestClassical, spec.dropout, rng),
          head_(spec.width, spec.outputs(), rng) {}

    Tensor<Scalar> forward(const Tensor<Scalar> &xc, const Tensor<Scalar> &,
                           const ForwardContext &ctx) const override {
        return head_(trunk_(xc, ctx));
    }
    void collect(std::vector<Tensor<Scalar>> &out) const override {
        trunk_.collect(out);
        head_.collect(out);
    }
    Linear<Scalar> &head() { return head_; }
    MlpTrunk<Scalar> &trunk() { return trunk_; }

  private:
    MlpTrunk<Scalar> trunk_;
    Linear<Scalar> head_;
};

/// ℓ = W_o z + b_o, or a LayerNorm MLP head on z for the deep variant.
template <typename Scalar> class QuantumModel final : public Model<Scalar> {
  public:
    QuantumModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec), circuit_(spec.circuit, rng), deep_(spec.kind == ModelKind::kQuantumDeep) {
        if (deep_) {
            trunk_ = MlpTrunk<Scalar>(circuit_.readout_size(), spec.width, spec.trunk_depth(), true,
                                      spec.dropout, rng);
        }
        head_ = Linear<Scalar>(deep_ ? spec.width : circuit_.readout_size(), spec.outputs(), rng);
    }

    Tensor<Scalar> forward(const Tensor<Scalar> &, const Tensor<Scalar> &xq,
                           const ForwardContext &ctx) const override {
        const Tensor<Scalar> z = circuit_(xq);
        return head_(deep_ ? trunk_(z, ctx) : z);
    }
    void collect(std::vector<Tensor<Scalar>> &out) const override {
        circuit_.collect(out);
        if (deep_) {
            trunk_.collect(out);
        }
        head_.collect(out);
    }
    Linear<Scalar> &head() { return head_; }
    QuantumLayer<Scalar> &circuit() { return circuit_; }

  private:
    QuantumLayer<Scalar> circuit_;
    bool deep_;
    MlpTrunk<Scalar> trunk_;
    Linear<Scalar> head_;
};

/// u = [x_c ; z], ℓ = g_e(u)
template <typename Scalar> class EarlyFusionModel final : public Model<Scalar> {
  public:
    EarlyFusionModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec), circuit_(spec.circuit, rng),
          trunk_(spec.classical_dim + circuit_.readout_size(), spec.width, spec.trunk_depth(), false,
                 spec.dropout, rng),
          head_(spec.width, spec.outputs(), rng) {}

    Tensor<Scalar> forward(const Tensor<Scalar> &xc, const Tensor<Scalar> &xq,
                           const ForwardContext &ctx) const override {
        return head_(trunk_(autodiff::concat_cols(xc, circuit_(xq)), ctx));
    }
    void collect(std::vector<Tensor<Scalar>> &out) const override {
        circuit_.collect(out);
        trunk_.collect(out);
        head_.collect(out);
    }
    MlpTrunk<Scalar> &trunk() { return trunk_; }
    QuantumLayer<Scalar> &circuit() { return circuit_; }

  private:
    QuantumLayer<Scalar> circuit_;
    MlpTrunk<Scalar> trunk_;
    Linear<Scalar> head_;
};

/// ℓ = σ(a) ℓ_c + (1 - σ(a)) ℓ_q
template <typename Scalar> class LateFusionModel final : public Model<Scalar> {
  public:
    LateFusionModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec),
          trunk_(spec.classical_dim, spec.width, spec.trunk_depth(),
                 spec.kind == ModelKind::kLateFusionDeep, spec.dropout, rng),
          classical_head_(spec.width, spec.outputs(), rng), circuit_(spec.circuit, rng),
          quantum_head_(circuit_.readout_size(), spec.outputs(), rng),
          gate_(Tensor<Scalar>::parameter(Matrix<Scalar>::Zero(1, 1))) {}

    Tensor<Scalar> forward(const Tensor<Scalar> &xc, const Tensor<Scalar> &xq,
                           const ForwardContext &ctx) const override {
        return autodiff::gate_mix(gate_, classical_logits(xc, ctx), quantum_logits(xq));
    }
    Tensor<Scalar> classical_logits(const Tensor<Scalar> &xc, const ForwardContext &ctx) const {
        return classical_head_(trunk_(xc, ctx));
    }
    Tensor<Scalar> quantum_logits(const Tensor<Scalar> &xq) const { return quantum_head_(circuit_(xq)); }

    void collect(std::vector<Tensor<Scalar>> &out) const override {
        trunk_.collect(out);
        classical_head_.collect(out);
        circuit_.collect(out);
        quantum_head_.collect(out);
        out.push_back(gate_);
    }
    Tensor<Scalar> &gate() { return gate_; }

  private:
    MlpTrunk<Scalar> trunk_;
    Linear<Scalar> classical_head_;
    QuantumLayer<Scalar> circuit_;
    Linear<Scalar> quantum_head_;
    Tensor<Scalar> gate_;
};

/**
 * h_c = W_c f_c(x_c) + b_c, h_q = W_q f_q(z) + b_q, h = σ(a) h_c + (1 - σ(a)) h_q,
 * ℓ = W_o h + b_o. The linear variant has identity extractors; the deep
 * variants use LayerNorm MLP trunks (depth k on the classical side, 2 on
 * the quantum side).
 */
template <typename Scalar> class LatentFusionModel final : public Model<Scalar> {
  public:
    LatentFusionModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec), deep_(spec.kind != ModelKind::kMidfusionLinear),
          circuit_(spec.circuit, rng) {
        Eigen::Index c_in = spec.classical_dim;
        Eigen::Index q_in = circuit_.readout_size();
        if (deep_) {
            classical_trunk_ = MlpTrunk<Scalar>(c_in, spec.width, spec.trunk_depth(), true, spec.dropout, rng);
            quantum_trunk_ = MlpTrunk<Scalar>(q_in, spec.width, 2, true, spec.dropout, rng);
            c_in = spec.width;
            q_in = spec.width;
        }
        classical_proj_ = Linear<Scalar>(c_in, spec.width, rng);
        quantum_proj_ = Linear<Scalar>(q_in, spec.width, rng);
        gate_ = Tensor<Scalar>::parameter(Matrix<Scalar>::Zero(1, 1));
        head_ = Linear<Scalar>(spec.width, spec.outputs(), rng);
    }

    Tensor<Scalar> forward(const Tensor<Scalar> &xc, const Tensor<Scalar> &xq,
                           const ForwardContext &ctx) const override {
        Tensor<Scalar> c = xc;
        Tensor<Scalar> z = circuit_(xq);
        if (deep_) {
            c = classical_trunk_(c, ctx);
            z = quantum_trunk_(z, ctx);
        }
        return head_(autodiff::gate_mix(gate_, classical_proj_(c), quantum_proj_(z)));
    }
    void collect(std::vector<Tensor<Scalar>> &out) const override {
        circuit_.collect(out);
        if (deep_) {
            classical_trunk_.collect(out);
            quantum_trunk_.collect(out);
        }
        classical_proj_.collect(out);
        quantum_proj_.collect(out);
        out.push_back(gate_);
        head_.collect(out);
    }

    Linear<Scalar> &classical_projection() { return classical_proj_; }
    Linear<Scalar> &quantum_projection() { return quantum_proj_; }
    Linear<Scalar> &head() { return head_; }
    MlpTrunk<Scalar> &classical_trunk() { return classical_trunk_; }
    Tensor<Scalar> &gate() { return gate_; }

  private:
    bool deep_;
    QuantumLayer<Scalar> circuit_;
    MlpTrunk<Scalar> classical_trunk_;
    MlpTrunk<Scalar> quantum_trunk_;
    Linear<Scalar> classical_proj_;
    Linear<Scalar> quantum_proj_;
    Tensor<Scalar> gate_;
    Linear<Scalar> head_;
};

/**
 * CLS token t_0 = W_c x_c + b_c (an MLP trunk in the deep variant), quantum
 * tokens t_m = W_t z_m + b_t + e_m with W_t shared across positions, one
 * Transformer block, logits from the CLS row.
 */
template <typename Scalar> class AttentionFusionModel final : public Model<Scalar> {
  public:
    AttentionFusionModel(const ModelSpec &spec, Rng &rng)
        : Model<Scalar>(spec), deep_(spec.kind == ModelKind::kMidfusionAttnDeep),
          circuit_(spec.circuit, rng) {
        if (deep_) {
            classical_trunk_ =
                MlpTrunk<Scalar>(spec.classical_dim, spec.width, spec.trunk_depth(), true, spec.dropout, rng);
        } else {
            classical_proj_ = Linear<Scalar>(spec.classical_dim, spec.width, rng);
        }
        token_proj_ = Linear<Scalar>(1, spec.width, rng);
        identity_ = Tensor<Scalar>::parameter(
            autodiff::uniform_matrix<Scalar>(circuit_.readout_size(), spec.width, 0.02, rng));
        block_ = autodiff::TransformerBlock<Scalar>(spec.width, spec.heads, spec.dropout, rng);
        head_ = Linear<Scalar>(spec.width, spec.outputs(), rng);
    }

    Tensor<Scalar> forward(const Tensor<Scalar> &xc, const Tensor<Scalar> &xq,
                           const ForwardContext &ctx) const override {
        return forward_from_readout(xc, circuit_(xq), ctx);
    }

    /// Everything after the circuit; `z` is N x M.
    Tensor<Scalar> forward_from_readout(const Tensor<Scalar> &xc, const Tensor<Scalar> &z,
                                        const ForwardContext &ctx,
                                        std::vector<Matrix<Scalar>> *attention = nullptr) const {
        const Eigen::Index m = z.cols();
        const Tensor<Scalar> cls = deep_ ? classical_trunk_(xc, ctx) : classical_proj_(xc);
        const Tensor<Scalar> scalars = autodiff::reshape(z, z.rows() * m, 1);
        const Tensor<Scalar> tokens = autodiff::add_tiled_rows(token_proj_(scalars), identity_);
        const Tensor<Scalar> sequence = autodiff::prepend_token(cls, tokens, m);
        const Tensor<Scalar> out = block_(sequence, m + 1, ctx, attention);
        return head_(autodiff::take_rows(out, m + 1, 0));
    }

    void collect(std::vector<Tensor<Scalar>> &out) const override {
        circuit_.collect(out);
        if (deep_) {
            classical_trunk_.collect(out);
        } else {
            classical_proj_.collect(out);
        }
        token_proj_.collect(out);
        out.push_back(identity_);
        block_.collect(out);
        head_.collect(out);
    }

    Tensor<Scalar> &identity_embeddings() { return identity_; }
    autodiff::TransformerBlock<Scalar> &block() { return block_; }
    Linear<Scalar> &classical_projection() { return classical_proj_; }

  private:
    bool deep_;
    QuantumLayer<Scalar> circuit_;
    MlpTrunk<Scalar> classical_trunk_;
    Linear<Scalar> classical_proj_;
    Linear<Scalar> token_proj_;
    Tensor<Scalar> identity_;
    autodiff::TransformerBlock<Scalar> block_;
    Linear<Scalar> head_;
};

template <typename Scalar> std::unique_ptr<Model<Scalar>> make_model(const ModelSpec &spec, Rng &rng) {
    spec.validate();
    switch (spec.kind) {
    case ModelKind::kClassical:
    case ModelKind::kBestClassical:
        return std::make_unique<ClassicalModel<Scalar>>(spec, rng);
    case ModelKind::kQuantumOnly:
    case ModelKind::kQuantumDeep:
        return std::make_unique<QuantumModel<Scalar>>(spec, rng);
    case ModelKind::kEarlyFusion:
        return std::make_unique<EarlyFusionModel<Scalar>>(spec, rng);
    case ModelKind::kLateFusion:
    case ModelKind::kLateFusionDeep:
        return std::make_unique<LateFusionModel<Scalar>>(spec, rng);
    case ModelKind::kMidfusionLinear:
    case ModelKind::kDeepFusion:
    case ModelKind::kVeryDeepFusion:
        return std::make_unique<LatentFusionModel<Scalar>>(spec, rng);
    case ModelKind::kMidfusionAttn:
    case ModelKind::kMidfusionAttnDeep:
        return std::make_unique<AttentionFusionModel<Scalar>>(spec, rng);
    }
    throw ConfigError("unhandled model kind");
}

} // namespace qfusion::models
