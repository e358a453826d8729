// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/data/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::data {

std::vector<std::size_t> Dataset::indices_of(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < splits.size(); ++i)
        if (splits[i] == s) out.push_back(i);
    return out;
}

nn::Tensor Dataset::gather(std::span<const std::size_t> idx) const {
    if (idx.empty()) throw std::invalid_argument("gather: empty index set");
    nn::Tensor t = nn::Tensor::zeros(static_cast<int>(idx.size()), channels, height, width);
    const std::size_t sz = image_size();
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const double* src = images.data() + idx[m] * sz;
        std::copy(src, src + sz, t.v.begin() + m * sz);
    }
    return t;
}

void Dataset::validate() const {
    if (channels < 1 || height < 1 || width < 1 || class_count < 2)
        throw std::invalid_argument("Dataset: bad shape/classes");
    if (images.size() != count() * image_size() || splits.size() != count())
        throw std::invalid_argument("Dataset: inconsistent sizes");
    for (int l : labels)
        if (l < 0 || l >= class_count) throw std::invalid_argument("Dataset: label out of range");
}

void normalize_per_channel(Dataset& ds) {
    const std::size_t hw = static_cast<std::size_t>(ds.height) * ds.width;
    std::vector<double> mean(ds.channels, 0.0), var(ds.channels, 0.0);
    std::size_t train_count = 0;
    for (std::size_t i = 0; i < ds.count(); ++i) {
        if (ds.splits[i] != Split::train) continue;
        ++train_count;
        const double* img = ds.images.data() + i * ds.image_size();
        for (int c = 0; c < ds.channels; ++c)
            for (std::size_t p = 0; p < hw; ++p) mean[c] += img[c * hw + p];
    }
    if (train_count == 0) throw std::invalid_argument("normalize: no training images");
    for (auto& m : mean) m /= static_cast<double>(train_count) * hw;
    for (std::size_t i = 0; i < ds.count(); ++i) {
        if (ds.splits[i] != Split::train) continue;
        const double* img = ds.images.data() + i * ds.image_size();
        for (int c = 0; c < ds.channels; ++c)
            for (std::size_t p = 0; p < hw; ++p) {
                const double d = img[c * hw + p] - mean[c];
                var[c] += d * d;
            }
    }
    ds.norm_mean = mean;
    ds.norm_std.resize(ds.channels);
    for (int c = 0; c < ds.channels; ++c)
        ds.norm_std[c] = std::max(std::sqrt(var[c] / (static_cast<double>(train_count) * hw)), 1e-8);
    for (std::size_t i = 0; i < ds.count(); ++i) {
        double* img = ds.images.data() + i * ds.image_size();
        for (int c = 0; c < ds.channels; ++c)
            for (std::size_t p = 0; p < hw; ++p)
                img[c * hw + p] = (img[c * hw + p] - mean[c]) / ds.norm_std[c];
    }
}

}  // namespace beaa::data
