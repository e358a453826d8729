// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/train/optimizer.hpp"

#include <stdexcept>

namespace beaa::train {

void regularized_grad(std::span<double> grad, std::span<const double> params, double reg_lambda) {
    if (grad.size() != params.size()) throw std::invalid_argument("regularized_grad: size mismatch");
    if (reg_lambda == 0.0) return;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += reg_lambda * params[i];
}

void nesterov_step(NesterovState& state, std::span<double> params, const GradFn& grad_at, double lr,
                   double mu) {
    if (state.velocity.empty()) state.velocity.assign(params.size(), 0.0);
    if (state.velocity.size() != params.size())
        throw std::invalid_argument("nesterov_step: state size mismatch");
    std::vector<double> lookahead(params.begin(), params.end());
    for (std::size_t i = 0; i < lookahead.size(); ++i) lookahead[i] += mu * state.velocity[i];
    std::vector<double> grad(params.size(), 0.0);
    grad_at(lookahead, grad);
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.velocity[i] = mu * state.velocity[i] - lr * grad[i];
        params[i] += state.velocity[i];
    }
    ++state.step;
}

std::vector<ParamView> param_views(nn::ModelWeights& w) {
    std::vector<ParamView> out;
    for (std::size_t i = 0; i < w.layers.size(); ++i) {
        const std::string tag = "layer" + std::to_string(i);
        auto& p = w.layers[i];
        if (auto* cp = std::get_if<nn::ConvParams>(&p)) {
            out.push_back({tag + ".w", ParamClass::conv_weight, &cp->w});
            if (!cp->b.empty()) out.push_back({tag + ".b", ParamClass::conv_bias, &cp->b});
        } else if (auto* bp = std::get_if<nn::BnParams>(&p)) {
            out.push_back({tag + ".gamma", ParamClass::bn_gamma, &bp->gamma});
            out.push_back({tag + ".beta", ParamClass::bn_beta, &bp->beta});
        } else if (auto* ap = std::get_if<nn::ActParams>(&p)) {
            out.push_back({tag + ".coeff", ParamClass::act_coeff, &ap->poly.coeff});
        } else if (auto* af = std::get_if<nn::AffineParams>(&p)) {
            out.push_back({tag + ".scale", ParamClass::affine_scale, &af->scale});
            out.push_back({tag + ".shift", ParamClass::affine_shift, &af->shift});
        } else if (auto* fp = std::get_if<nn::FireParams>(&p)) {
            out.push_back({tag + ".squeeze.w", ParamClass::conv_weight, &fp->squeeze.w});
            out.push_back({tag + ".squeeze.b", ParamClass::conv_bias, &fp->squeeze.b});
            out.push_back({tag + ".expand1.w", ParamClass::conv_weight, &fp->expand1.w});
            out.push_back({tag + ".expand1.b", ParamClass::conv_bias, &fp->expand1.b});
            out.push_back({tag + ".expand3.w", ParamClass::conv_weight, &fp->expand3.w});
            out.push_back({tag + ".expand3.b", ParamClass::conv_bias, &fp->expand3.b});
        }
    }
    return out;
}

nn::ModelWeights zero_like(const nn::ModelWeights& w) {
    nn::ModelWeights z = w;
    for (auto view : param_views(z))
        for (auto& x : *view.data) x = 0.0;
    return z;
}

}  // namespace beaa::train
