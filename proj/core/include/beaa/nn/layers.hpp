// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "beaa/nn/activation.hpp"
#include "beaa/nn/tensor.hpp"

namespace beaa::nn {

enum class ActKind { relu, poly };

struct Conv2d {
    int in_ch = 0, out_ch = 0;
    int ksize = 3;  // 1 or 3
    int stride = 1;
    int pad = 0;
    bool has_bias = true;
};

struct BatchNorm {
    double eps = 1e-5;
    double momentum = 0.9;  // running-stat decay
};

struct Activation {
    ActKind kind = ActKind::poly;
    Granularity granularity = Granularity::layer;
};

struct AvgPool {
    int window = 2;
    int stride = 2;
};

struct GlobalAvgPool {};

/// Squeeze 1x1 conv feeding two expand branches (1x1 and 3x3) whose outputs
/// concatenate on the channel axis.
struct Fire {
    Conv2d squeeze, expand1, expand3;
};

/// Per-channel scale + shift; what BatchNorm folds into.
struct Affine {};

using LayerSpec = std::variant<Conv2d, BatchNorm, Activation, AvgPool, GlobalAvgPool, Fire, Affine>;

struct Shape {
    int c = 0, h = 0, w = 0;
    bool operator==(const Shape&) const = default;
};

struct NetworkSpec {
    int in_channels = 0, in_height = 0, in_width = 0;
    int num_classes = 0;
    std::vector<LayerSpec> layers;

    // Output shape of each layer; throws on any composition mismatch.
    std::vector<Shape> shapes() const;
    Shape input_shape() const { return {in_channels, in_height, in_width}; }
};

Shape layer_output_shape(const LayerSpec& layer, const Shape& in);

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct ConvParams {
    std::vector<double> w;  // [out][in][ky][kx]
    std::vector<double> b;  // [out], empty when bias disabled
};
struct BnParams {
    std::vector<double> gamma, beta, running_mean, running_var;  // per channel
};
struct ActParams {
    PolyActivation poly;  // unused for relu
};
struct AffineParams {
    std::vector<double> scale, shift;  // per channel
};
struct FireParams {
    ConvParams squeeze, expand1, expand3;
};
struct NoParams {
    bool operator==(const NoParams&) const = default;
};

using LayerParams = std::variant<NoParams, ConvParams, BnParams, ActParams, AffineParams, FireParams>;

struct ModelWeights {
    std::vector<LayerParams> layers;
};

std::size_t conv_weight_count(const Conv2d& c);

}  // namespace beaa::nn
