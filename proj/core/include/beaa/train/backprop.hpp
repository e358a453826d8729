// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "beaa/nn/network.hpp"

namespace beaa::train {

/// Backpropagates dlogits through a cached forward pass, accumulating
/// parameter gradients into `grads` (weights-shaped, pre-zeroed by callers
/// that want fresh gradients). BatchNorm layers must have been run in
/// training mode for the cache to carry batch statistics.
void backward_plain(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                    const nn::ForwardCache& cache, const nn::Tensor& dlogits,
                    nn::ModelWeights& grads);

}  // namespace beaa::train
