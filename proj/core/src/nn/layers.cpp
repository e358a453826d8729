// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/nn/layers.hpp"

#include <stdexcept>

namespace beaa::nn {

namespace {

int conv_out_dim(int in, int k, int stride, int pad) {
    const int numer = in + 2 * pad - k;
    if (numer < 0) throw std::invalid_argument("conv: kernel larger than padded input");
    return numer / stride + 1;
}

}  // namespace

Shape layer_output_shape(const LayerSpec& layer, const Shape& in) {
    struct V {
        const Shape& s;
        Shape operator()(const Conv2d& c) const {
            if (c.in_ch != s.c) throw std::invalid_argument("conv: channel mismatch");
            if (c.ksize != 1 && c.ksize != 3) throw std::invalid_argument("conv: kernel must be 1x1 or 3x3");
            return {c.out_ch, conv_out_dim(s.h, c.ksize, c.stride, c.pad),
                    conv_out_dim(s.w, c.ksize, c.stride, c.pad)};
        }
        Shape operator()(const BatchNorm&) const { return s; }
        Shape operator()(const Activation&) const { return s; }
        Shape operator()(const Affine&) const { return s; }
        Shape operator()(const AvgPool& p) const {
            if (p.window < 1 || p.stride < 1) throw std::invalid_argument("pool: invalid window");
            if (s.h % p.window != 0 || s.w % p.window != 0 || p.stride != p.window)
                throw std::invalid_argument("pool: window must tile the input");
            return {s.c, s.h / p.window, s.w / p.window};
        }
        Shape operator()(const GlobalAvgPool&) const { return {s.c, 1, 1}; }
        Shape operator()(const Fire& f) const {
            Shape sq = V{s}(f.squeeze);
            Shape e1 = V{sq}(f.expand1);
            Shape e3 = V{sq}(f.expand3);
            if (e1.h != e3.h || e1.w != e3.w) throw std::invalid_argument("fire: expand shape mismatch");
            return {e1.c + e3.c, e1.h, e1.w};
        }
    };
    return std::visit(V{in}, layer);
}

std::vector<Shape> NetworkSpec::shapes() const {
    std::vector<Shape> out;
    out.reserve(layers.size());
    Shape cur = input_shape();
    for (const auto& layer : layers) {
        cur = layer_output_shape(layer, cur);
        out.push_back(cur);
    }
    if (!layers.empty()) {
        if (cur.c != num_classes)
            throw std::invalid_argument("network: final channel count != num_classes");
    }
    return out;
}

std::size_t conv_weight_count(const Conv2d& c) {
    return static_cast<std::size_t>(c.out_ch) * c.in_ch * c.ksize * c.ksize;
}

}  // namespace beaa::nn
