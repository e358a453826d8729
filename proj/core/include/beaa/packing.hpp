// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "beaa/he/backend.hpp"

namespace beaa::pack {

/// Batch of M images sharing (channels, height, width). Values row-major
/// as data[((m * c + ch) * h + y) * w + x].
struct ImageBatch {
    int batch = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    static ImageBatch zeros(int m, int c, int h, int w);
    double& at(int m, int c, int y, int x);
    double at(int m, int c, int y, int x) const;
    std::size_t size() const { return data.size(); }
    void validate() const;  // shape/finite checks
};

enum class Layout { element_wise, channel_wise };

/// Element-wise pack: one slot vector per feature position (c, y, x); slot i
/// of cell (c, y, x) holds image i's value there, padding slots zero. Cells
/// stored (c, y, x) row-major. Packing is a pure permutation, so the
/// plaintext roundtrip is exact.
struct PackedTensor {
    int batch = 0;  // logical M; slots beyond it carry zeros
    int channels = 0, height = 0, width = 0;
    std::vector<std::vector<double>> cells;

    std::size_t cell_index(int c, int y, int x) const;
};

/// Channel-wise pack: one slot vector per (image, channel), holding the
/// H*W features row-major. Packs stored (m, c) row-major.
struct ChannelPackedTensor {
    int batch = 0;
    int channels = 0, height = 0, width = 0;
    std::vector<std::vector<double>> packs;
};

PackedTensor pack_elementwise(const ImageBatch& batch, const he::HeParams& params);
ImageBatch unpack_elementwise(const PackedTensor& pt, int batch_size);

ChannelPackedTensor pack_channelwise(const ImageBatch& batch, const he::HeParams& params);
ImageBatch unpack_channelwise(const ChannelPackedTensor& pt);

double slot_utilization(std::uint64_t used_slots, const he::HeParams& params);

/// Ciphertext-domain grid produced by encrypting a PackedTensor cell by cell.
struct PackedCipherTensor {
    Layout layout = Layout::element_wise;
    int batch = 0;
    int channels = 0, height = 0, width = 0;
    std::vector<he::Ciphertext> cells;
};

PackedCipherTensor encrypt_packed(const PackedTensor& pt, const he::HeBackend& backend,
                                  const he::PublicKey& pk, Rng& rng);
PackedTensor decrypt_packed(const PackedCipherTensor& ct, const he::HeBackend& backend,
                            const he::SecretKey& sk);

}  // namespace beaa::pack
