// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/nn/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beaa::nn {

Tensor Tensor::zeros(int m, int c, int h, int w) {
    if (m < 1 || c < 1 || h < 1 || w < 1) throw std::invalid_argument("Tensor: bad shape");
    Tensor t;
    t.batch = m;
    t.channels = c;
    t.height = h;
    t.width = w;
    t.v.assign(static_cast<std::size_t>(m) * c * h * w, 0.0);
    return t;
}

void Tensor::check_finite(const char* what) const {
    for (double x : v)
        if (!std::isfinite(x)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

}  // namespace beaa::nn
