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
#include "qfusion/bench/seeding.hpp"

namespace qfusion::bench {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

SeedTree SeedTree::child(std::string_view tag) const {
    return SeedTree(splitmix64(value_ ^ splitmix64(fnv1a(tag) + kGolden)));
}

SeedTree SeedTree::child(std::uint64_t index) const {
    // Integers and strings live in separate tag spaces.
    return SeedTree(splitmix64(value_ ^ splitmix64(splitmix64(index) ^ 0x5851F42D4C957F2DULL)));
}

SeedTree seed_everything(std::uint64_t seed) { return SeedTree(splitmix64(seed)); }

} // namespace qfusion::bench
