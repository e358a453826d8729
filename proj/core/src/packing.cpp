// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/packing.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::pack {

ImageBatch ImageBatch::zeros(int m, int c, int h, int w) {
    if (m < 1 || c < 1 || h < 1 || w < 1) throw std::invalid_argument("ImageBatch: bad shape");
    ImageBatch b;
    b.batch = m;
    b.channels = c;
    b.height = h;
    b.width = w;
    b.data.assign(static_cast<std::size_t>(m) * c * h * w, 0.0);
    return b;
}

double& ImageBatch::at(int m, int c, int y, int x) {
    return data[((static_cast<std::size_t>(m) * channels + c) * height + y) * width + x];
}
double ImageBatch::at(int m, int c, int y, int x) const {
    return data[((static_cast<std::size_t>(m) * channels + c) * height + y) * width + x];
}

void ImageBatch::validate() const {
    if (batch < 1 || channels < 1 || height < 1 || width < 1)
        throw std::invalid_argument("ImageBatch: bad shape");
    if (data.size() != static_cast<std::size_t>(batch) * channels * height * width)
        throw std::invalid_argument("ImageBatch: shape/data mismatch");
    for (double v : data)
        if (!std::isfinite(v)) throw std::invalid_argument("ImageBatch: non-finite value");
}

std::size_t PackedTensor::cell_index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height + y) * width + x;
}

PackedTensor pack_elementwise(const ImageBatch& batch, const he::HeParams& params) {
    batch.validate();
    const std::uint32_t slots = params.slot_count();
    if (static_cast<std::uint32_t>(batch.batch) > slots)
        throw std::invalid_argument("pack_elementwise: batch exceeds slot capacity N/2");
    PackedTensor pt;
    pt.batch = batch.batch;
    pt.channels = batch.channels;
    pt.height = batch.height;
    pt.width = batch.width;
    pt.cells.assign(static_cast<std::size_t>(batch.channels) * batch.height * batch.width,
                    std::vector<double>(slots, 0.0));
    for (int c = 0; c < batch.channels; ++c)
        for (int y = 0; y < batch.height; ++y)
            for (int x = 0; x < batch.width; ++x) {
                auto& cell = pt.cells[pt.cell_index(c, y, x)];
                for (int m = 0; m < batch.batch; ++m) cell[m] = batch.at(m, c, y, x);
            }
    return pt;
}

ImageBatch unpack_elementwise(const PackedTensor& pt, int batch_size) {
    if (batch_size < 1 || batch_size > pt.batch)
        throw std::invalid_argument("unpack_elementwise: batch size exceeds packed count");
    ImageBatch b = ImageBatch::zeros(batch_size, pt.channels, pt.height, pt.width);
    for (int c = 0; c < pt.channels; ++c)
        for (int y = 0; y < pt.height; ++y)
            for (int x = 0; x < pt.width; ++x) {
                const auto& cell = pt.cells[pt.cell_index(c, y, x)];
                for (int m = 0; m < batch_size; ++m) b.at(m, c, y, x) = cell[m];
            }
    return b;
}

ChannelPackedTensor pack_channelwise(const ImageBatch& batch, const he::HeParams& params) {
    batch.validate();
    const std::uint32_t slots = params.slot_count();
    const std::size_t hw = static_cast<std::size_t>(batch.height) * batch.width;
    if (hw > slots) throw std::invalid_argument("pack_channelwise: H*W exceeds slot capacity N/2");
    ChannelPackedTensor pt;
    pt.batch = batch.batch;
    pt.channels = batch.channels;
    pt.height = batch.height;
    pt.width = batch.width;
    pt.packs.assign(static_cast<std::size_t>(batch.batch) * batch.channels,
                    std::vector<double>(slots, 0.0));
    for (int m = 0; m < batch.batch; ++m)
        for (int c = 0; c < batch.channels; ++c) {
            auto& p = pt.packs[static_cast<std::size_t>(m) * batch.channels + c];
            for (int y = 0; y < batch.height; ++y)
                for (int x = 0; x < batch.width; ++x)
                    p[static_cast<std::size_t>(y) * batch.width + x] = batch.at(m, c, y, x);
        }
    return pt;
}

ImageBatch unpack_channelwise(const ChannelPackedTensor& pt) {
    ImageBatch b = ImageBatch::zeros(pt.batch, pt.channels, pt.height, pt.width);
    for (int m = 0; m < pt.batch; ++m)
        for (int c = 0; c < pt.channels; ++c) {
            const auto& p = pt.packs[static_cast<std::size_t>(m) * pt.channels + c];
            for (int y = 0; y < pt.height; ++y)
                for (int x = 0; x < pt.width; ++x)
                    b.at(m, c, y, x) = p[static_cast<std::size_t>(y) * pt.width + x];
        }
    return b;
}

double slot_utilization(std::uint64_t used_slots, const he::HeParams& params) {
    const std::uint64_t slots = params.slot_count();
    if (used_slots > slots) throw std::invalid_argument("slot_utilization: used slots exceed capacity");
    return static_cast<double>(used_slots) / static_cast<double>(slots);
}

PackedCipherTensor encrypt_packed(const PackedTensor& pt, const he::HeBackend& backend,
                                  const he::PublicKey& pk, Rng& rng) {
    PackedCipherTensor out;
    out.layout = Layout::element_wise;
    out.batch = pt.batch;
    out.channels = pt.channels;
    out.height = pt.height;
    out.width = pt.width;
    out.cells.reserve(pt.cells.size());
    for (const auto& cell : pt.cells)
        out.cells.push_back(backend.encrypt(backend.encode(cell), pk, rng));
    return out;
}

PackedTensor decrypt_packed(const PackedCipherTensor& ct, const he::HeBackend& backend,
                            const he::SecretKey& sk) {
    PackedTensor out;
    out.batch = ct.batch;
    out.channels = ct.channels;
    out.height = ct.height;
    out.width = ct.width;
    out.cells.reserve(ct.cells.size());
    for (const auto& cell : ct.cells) out.cells.push_back(backend.decrypt_decode(cell, sk));
    return out;
}

}  // namespace beaa::pack
