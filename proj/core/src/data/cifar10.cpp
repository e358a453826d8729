// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "beaa/data/dataset.hpp"

namespace beaa::data {

namespace {

constexpr std::size_t kRecord = 3073;  // 1 label byte + 3 * 32 * 32 pixels
constexpr std::size_t kPixels = 3072;

void read_batch_file(const std::filesystem::path& file, std::vector<double>& images,
                     std::vector<int>& labels, std::size_t limit) {
    std::ifstream is(file, std::ios::binary | std::ios::ate);
    if (!is) throw std::runtime_error("cifar10: cannot open " + file.string());
    const auto bytes = static_cast<std::size_t>(is.tellg());
    if (bytes % kRecord != 0)
        throw std::runtime_error("cifar10: " + file.string() + " is not a whole number of 3073-byte records");
    is.seekg(0);
    std::vector<unsigned char> rec(kRecord);
    const std::size_t records = bytes / kRecord;
    for (std::size_t r = 0; r < records; ++r) {
        if (limit && labels.size() >= limit) return;
        is.read(reinterpret_cast<char*>(rec.data()), kRecord);
        if (!is) throw std::runtime_error("cifar10: truncated record in " + file.string());
        const int label = rec[0];
        if (label > 9) throw std::runtime_error("cifar10: label byte out of range");
        labels.push_back(label);
        for (std::size_t p = 0; p < kPixels; ++p)
            images.push_back(static_cast<double>(rec[1 + p]) / 255.0);
    }
}

}  // namespace

Dataset load_cifar10(const std::filesystem::path& dir, std::size_t max_train, std::size_t max_test,
                     double val_fraction, std::uint64_t seed) {
    Dataset ds;
    ds.channels = 3;
    ds.height = 32;
    ds.width = 32;
    ds.class_count = 10;

    std::vector<double> train_images;
    std::vector<int> train_labels;
    for (int b = 1; b <= 5; ++b) {
        const auto file = dir / ("data_batch_" + std::to_string(b) + ".bin");
        if (!std::filesystem::exists(file)) continue;
        read_batch_file(file, train_images, train_labels, max_train);
    }
    if (train_labels.empty())
        throw std::runtime_error("cifar10: no data_batch_*.bin found under " + dir.string());

    std::vector<double> test_images;
    std::vector<int> test_labels;
    const auto test_file = dir / "test_batch.bin";
    if (std::filesystem::exists(test_file)) read_batch_file(test_file, test_images, test_labels, max_test);

    ds.images = std::move(train_images);
    ds.labels = std::move(train_labels);
    ds.splits.assign(ds.labels.size(), Split::train);

    // carve the validation split out of train by seeded shuffle
    const std::size_t n_train = ds.labels.size();
    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0xda7a));
    std::shuffle(order.begin(), order.end(), rng);
    const auto n_val = static_cast<std::size_t>(static_cast<double>(n_train) * val_fraction);
    for (std::size_t i = 0; i < n_val; ++i) ds.splits[order[i]] = Split::val;

    ds.images.insert(ds.images.end(), test_images.begin(), test_images.end());
    ds.labels.insert(ds.labels.end(), test_labels.begin(), test_labels.end());
    ds.splits.insert(ds.splits.end(), test_labels.size(), Split::test);

    ds.validate();
    normalize_per_channel(ds);
    return ds;
}

}  // namespace beaa::data
