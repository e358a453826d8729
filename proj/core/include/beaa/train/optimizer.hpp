// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "beaa/nn/layers.hpp"

namespace beaa::train {

/// grad += lambda * param  (the L2 penalty term of the coefficient update).
void regularized_grad(std::span<double> grad, std::span<const double> params, double reg_lambda);

/// Per-parameter impulse state for Nesterov descent, initialized to zero.
struct NesterovState {
    std::vector<double> velocity;
    std::uint64_t step = 0;
};

using GradFn = std::function<void(std::span<const double> params, std::span<double> grad_out)>;

/// One Nesterov update: V <- mu*V - lr * grad(c + mu*V), then c advances by
/// the fresh impulse.
void nesterov_step(NesterovState& state, std::span<double> params, const GradFn& grad_at, double lr,
                   double mu);

// ---------------------------------------------------------------------------
// Uniform access to every trainable array in a ModelWeights
// ---------------------------------------------------------------------------

enum class ParamClass { conv_weight, conv_bias, bn_gamma, bn_beta, act_coeff, affine_scale, affine_shift };

struct ParamView {
    std::string name;
    ParamClass cls;
    std::vector<double>* data;
};

std::vector<ParamView> param_views(nn::ModelWeights& w);

/// Weights-shaped container of zeros (gradients / velocities).
nn::ModelWeights zero_like(const nn::ModelWeights& w);

}  // namespace beaa::train
