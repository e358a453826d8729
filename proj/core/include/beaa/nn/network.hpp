// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "beaa/common.hpp"
#include "beaa/nn/layers.hpp"

namespace beaa::nn {

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

/// Channel widths of the optimized SqueezeNet instantiation. The reference
/// figure fixes module order (4 Conv, 2 Fire, 3 Pool, global average pool
/// last) but not widths; these defaults are the canonical ones recorded in
/// configs/squeezenet-opt.json.
struct SqueezeNetOptConfig {
    int conv1_out = 32;
    int fire1_squeeze = 16, fire1_expand = 32;
    int fire2_squeeze = 16, fire2_expand = 32;
    int conv2_out = 64;
    int conv3_out = 32;
};

NetworkSpec build_squeezenet_opt(int num_classes, int in_channels, int in_height, int in_width,
                                 ActKind act, Granularity granularity,
                                 const SqueezeNetOptConfig& cfg = {});

ModelWeights init_weights(const NetworkSpec& spec, Rng& rng, double act_coeff_noise = 0.0);

// ---------------------------------------------------------------------------
// Plain (cleartext) execution
// ---------------------------------------------------------------------------

struct BnCache {
    std::vector<double> mean, var;  // statistics used by the forward pass
};
struct FireCache {
    Tensor squeeze_out;
};
using LayerAux = std::variant<std::monostate, BnCache, FireCache>;

struct ForwardCache {
    Tensor input;
    std::vector<Tensor> layer_out;  // output of every layer
    std::vector<LayerAux> aux;
};

/// Runs the network; returns logits of shape (M, num_classes, 1, 1).
/// With training=true BatchNorm uses batch statistics (recorded in the
/// cache); otherwise running statistics.
Tensor forward_plain(const NetworkSpec& spec, const ModelWeights& weights, const Tensor& input,
                     ForwardCache* cache = nullptr, bool training = false);

/// Replaces every BatchNorm with the per-channel Affine it freezes into;
/// forward results are unchanged. Idempotent.
std::pair<NetworkSpec, ModelWeights> fold_batchnorm(const NetworkSpec& spec, const ModelWeights& weights);

// Individual layer forwards (shared with the gradient pass).
Tensor conv2d_forward(const Tensor& x, const Conv2d& spec, const ConvParams& p);
Tensor avg_pool(const Tensor& x, int window, int stride);
Tensor global_avg_pool(const Tensor& x);

// Gradient-side primitives for conv (im2col-based).
void conv2d_backward(const Tensor& x, const Conv2d& spec, const ConvParams& p, const Tensor& upstream,
                     Tensor* dx, ConvParams* dp);

}  // namespace beaa::nn
