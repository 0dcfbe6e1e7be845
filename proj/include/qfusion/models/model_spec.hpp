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
 * @file model_spec.hpp
 * Model families and their construction parameters.
 */
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "qfusion/quantum/circuit.hpp"

namespace qfusion::models {

enum class ModelKind {
    kClassical,
    kBestClassical,
    kQuantumOnly,
    kQuantumDeep,
    kEarlyFusion,
    kLateFusion,
    kLateFusionDeep,
    kMidfusionLinear,
    kMidfusionAttn,
    kMidfusionAttnDeep,
    kDeepFusion,
    kVeryDeepFusion,
};

inline constexpr std::array<ModelKind, 12> kAllModelKinds{
    ModelKind::kClassical,       ModelKind::kBestClassical,     ModelKind::kQuantumOnly,
    ModelKind::kQuantumDeep,     ModelKind::kEarlyFusion,       ModelKind::kLateFusion,
    ModelKind::kLateFusionDeep,  ModelKind::kMidfusionLinear,   ModelKind::kMidfusionAttn,
    ModelKind::kMidfusionAttnDeep, ModelKind::kDeepFusion,      ModelKind::kVeryDeepFusion,
};

std::string_view to_string(ModelKind kind);

/// Accepts the canonical names and a few aliases (classical_deep,
/// quantum_deep_head). Throws ConfigError for anything else.
ModelKind parse_model_kind(std::string_view name);

/// Whether the family has a classical / quantum branch.
bool uses_classical(ModelKind kind);
bool uses_quantum(ModelKind kind);
/// Whether the family is a hybrid (both branches).
bool is_fusion(ModelKind kind);

/// Default for the optional 95%-variance PCA on the classical branch.
/// Off for the classical baselines and early fusion, which read the full
/// standardized features.
bool default_classical_pca(ModelKind kind);

/// MLP depth used by the family's main classical trunk.
int default_depth(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::kClassical;
    Eigen::Index classical_dim = 0;  // width of the classical input
    std::size_t num_classes = 2;
    Eigen::Index width = 64;
    Eigen::Index heads = 4;
    double dropout = 0.10;
    int depth = 0;  // 0 = family default
    quantum::CircuitConfig circuit{};

    /// Logit count: 1 for binary tasks, C otherwise.
    [[nodiscard]] Eigen::Index outputs() const {
        return num_classes == 2 ? 1 : static_cast<Eigen::Index>(num_classes);
    }
    [[nodiscard]] int trunk_depth() const { return depth > 0 ? depth : default_depth(kind); }

    void validate() const;
};

} // namespace qfusion::models
