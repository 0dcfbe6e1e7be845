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
#include "qfusion/models/model_spec.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace qfusion::models {

namespace {

struct KindInfo {
    ModelKind kind;
    std::string_view name;
    bool classical;
    bool quantum;
    bool classical_pca;
    int depth;
};

constexpr std::array<KindInfo, 12> kKinds{{
    {ModelKind::kClassical, "classical", true, false, false, 2},
    {ModelKind::kBestClassical, "best_classical", true, false, false, 3},
    {ModelKind::kQuantumOnly, "quantum_only", false, true, false, 0},
    {ModelKind::kQuantumDeep, "quantum_deep", false, true, false, 3},
    {ModelKind::kEarlyFusion, "early_fusion", true, true, false, 2},
    {ModelKind::kLateFusion, "late_fusion", true, true, true, 2},
    {ModelKind::kLateFusionDeep, "late_fusion_deep", true, true, true, 3},
    {ModelKind::kMidfusionLinear, "midfusion_linear", true, true, true, 1},
    {ModelKind::kMidfusionAttn, "midfusion_attn", true, true, true, 1},
    {ModelKind::kMidfusionAttnDeep, "midfusion_attn_deep", true, true, true, 3},
    {ModelKind::kDeepFusion, "deep_fusion", true, true, true, 3},
    {ModelKind::kVeryDeepFusion, "very_deep_fusion", true, true, true, 4},
}};

const KindInfo &info(ModelKind kind) {
    return *std::find_if(kKinds.begin(), kKinds.end(),
                         [kind](const KindInfo &k) { return k.kind == kind; });
}

} // namespace

std::string_view to_string(ModelKind kind) { return info(kind).name; }

ModelKind parse_model_kind(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    if (key == "classical_deep") {
        return ModelKind::kBestClassical;
    }
    if (key == "quantum_deep_head") {
        return ModelKind::kQuantumDeep;
    }
    for (const auto &k : kKinds) {
        if (k.name == key) {
            return k.kind;
        }
    }
    throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

bool uses_classical(ModelKind kind) { return info(kind).classical; }
bool uses_quantum(ModelKind kind) { return info(kind).quantum; }
bool is_fusion(ModelKind kind) { return uses_classical(kind) && uses_quantum(kind); }
bool default_classical_pca(ModelKind kind) { return info(kind).classical_pca; }
int default_depth(ModelKind kind) { return info(kind).depth; }

void ModelSpec::validate() const {
    if (num_classes < 2) {
        throw ConfigError("a model needs at least 2 classes");
    }
    if (width < 1 || heads < 1 || width % heads != 0) {
        throw ConfigError("latent width " + std::to_string(width) + " must be a positive multiple of " +
                          std::to_string(heads) + " heads");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) {
        throw ConfigError("dropout must lie in [0, 1)");
    }
    if (depth < 0 || depth > 8) {
        throw ConfigError("trunk depth must lie in [0, 8]");
    }
    if (uses_classical(kind) && classical_dim < 1) {
        throw ConfigError(std::string(to_string(kind)) + " needs a classical input width");
    }
    if (uses_quantum(kind)) {
        circuit.validate();
    }
}

} // namespace qfusion::models
