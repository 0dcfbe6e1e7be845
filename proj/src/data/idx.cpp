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
#include <array>
#include <cstdint>
#include <fstream>

#include "qfusion/core/error.hpp"
#include "qfusion/data/dataset.hpp"

namespace qfusion::data {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream &in, const std::filesystem::path &path) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char *>(b.data()), 4)) {
        throw DataError(path.string() + ": truncated IDX header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
           std::uint32_t{b[3]};
}

std::vector<unsigned char> read_payload(std::istream &in, std::size_t bytes,
                                        const std::filesystem::path &path) {
    std::vector<unsigned char> buf(bytes);
    if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(bytes))) {
        throw DataError(path.string() + ": truncated IDX payload, expected " +
                        std::to_string(bytes) + " bytes");
    }
    return buf;
}

} // namespace

Dataset load_idx_images(const std::filesystem::path &images, const std::filesystem::path &labels,
                        const std::string &name) {
    std::ifstream img(images, std::ios::binary);
    if (!img) {
        throw DataError("cannot open " + images.string());
    }
    std::ifstream lab(labels, std::ios::binary);
    if (!lab) {
        throw DataError("cannot open " + labels.string());
    }
    if (const auto magic = read_be32(img, images); magic != kImageMagic) {
        throw DataError(images.string() + ": bad IDX image magic " + std::to_string(magic));
    }
    const std::size_t count = read_be32(img, images);
    const std::size_t rows = read_be32(img, images);
    const std::size_t cols = read_be32(img, images);
    if (const auto magic = read_be32(lab, labels); magic != kLabelMagic) {
        throw DataError(labels.string() + ": bad IDX label magic " + std::to_string(magic));
    }
    const std::size_t label_count = read_be32(lab, labels);
    if (label_count != count) {
        throw DataError("IDX image/label counts differ: " + std::to_string(count) + " vs " +
                        std::to_string(label_count));
    }
    const std::size_t pixels = rows * cols;
    const auto raw = read_payload(img, count * pixels, images);
    const auto raw_labels = read_payload(lab, count, labels);

    Dataset ds;
    ds.name = name.empty() ? images.parent_path().filename().string() : name;
    ds.x.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(pixels));
    for (std::size_t i = 0; i < count * pixels; ++i) {
        ds.x.data()[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    int max_label = 0;
    ds.y.reserve(count);
    for (unsigned char l : raw_labels) {
        ds.y.push_back(l);
        max_label = std::max<int>(max_label, l);
    }
    for (int c = 0; c <= max_label; ++c) {
        ds.class_names.push_back(std::to_string(c));
    }
    ds.provenance.push_back("source: " + images.filename().string() + " + " +
                            labels.filename().string() + " (" + std::to_string(count) + " images " +
                            std::to_string(rows) + "x" + std::to_string(cols) + ")");
    return ds;
}

} // namespace qfusion::data
