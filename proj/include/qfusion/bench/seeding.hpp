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
 * @file seeding.hpp
 * Hierarchical seeds. Every random stream of a run is derived from the root
 * seed by walking a path of tags, e.g. root / "wine" / "midfusion_attn" /
 * fold 3 / "init". No global generator is involved, so results do not depend
 * on job scheduling.
 *
 * child(v, tag) = splitmix64(v ^ splitmix64(fnv1a(tag) + 0x9E3779B97F4A7C15))
 */
#pragma once

#include <cstdint>
#include <string_view>

namespace qfusion::bench {

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

class SeedTree {
  public:
    explicit SeedTree(std::uint64_t value) : value_(value) {}

    [[nodiscard]] SeedTree child(std::string_view tag) const;
    [[nodiscard]] SeedTree child(std::uint64_t index) const;
    [[nodiscard]] std::uint64_t value() const { return value_; }

  private:
    std::uint64_t value_;
};

/// Root of the seed tree for a run.
SeedTree seed_everything(std::uint64_t seed);

} // namespace qfusion::bench
