// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace beaa::nn {

/// Batched (M, C, H, W) tensor of doubles, row-major. Logits use H = W = 1.
struct Tensor {
    int batch = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> v;

    static Tensor zeros(int m, int c, int h, int w);

    double& at(int m, int c, int y, int x) {
        return v[((static_cast<std::size_t>(m) * channels + c) * height + y) * width + x];
    }
    double at(int m, int c, int y, int x) const {
        return v[((static_cast<std::size_t>(m) * channels + c) * height + y) * width + x];
    }
    std::size_t chw() const { return static_cast<std::size_t>(channels) * height * width; }
    std::size_t size() const { return v.size(); }
    bool same_shape(const Tensor& o) const {
        return batch == o.batch && channels == o.channels && height == o.height && width == o.width;
    }
    void check_finite(const char* what) const;
};

}  // namespace beaa::nn
