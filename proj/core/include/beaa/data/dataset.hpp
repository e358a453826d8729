// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "beaa/common.hpp"
#include "beaa/nn/tensor.hpp"

namespace beaa::data {

enum class Split { train, val, test };

struct Dataset {
    int channels = 0, height = 0, width = 0;
    int class_count = 0;
    std::vector<double> images;  // count * (c*h*w), normalized
    std::vector<int> labels;
    std::vector<Split> splits;
    std::vector<double> norm_mean, norm_std;  // per channel, recorded at load

    std::size_t count() const { return labels.size(); }
    std::size_t image_size() const { return static_cast<std::size_t>(channels) * height * width; }
    std::vector<std::size_t> indices_of(Split s) const;
    nn::Tensor gather(std::span<const std::size_t> idx) const;
    void validate() const;
};

/// Standardizes images in place per channel using statistics of the train
/// split; the constants are recorded on the dataset.
void normalize_per_channel(Dataset& ds);

/// Standard binary batches (1 label byte + 3072 pixel bytes per record,
/// channel-planar 3x32x32, pixels scaled to [0, 1]). Reads data_batch_*.bin
/// as the train split and test_batch.bin as the test split; a fraction of
/// train records becomes the validation split.
Dataset load_cifar10(const std::filesystem::path& dir, std::size_t max_train = 0,
                     std::size_t max_test = 0, double val_fraction = 0.1, std::uint64_t seed = 1);

/// Directory-per-class image tree (binary PPM/PGM files), resized bilinearly
/// to target_size x target_size and split 60/10/30 per class by seeded
/// shuffle.
Dataset load_image_dir(const std::filesystem::path& dir, int target_size, std::uint64_t seed = 1);

}  // namespace beaa::data
