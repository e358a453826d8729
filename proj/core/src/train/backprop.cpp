// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/train/backprop.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::train {

using nn::Tensor;

namespace {

void add_into(std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

Tensor batchnorm_backward(const Tensor& x, const nn::BatchNorm& bn, const nn::BnParams& p,
                          const nn::BnCache& cache, const Tensor& up, nn::BnParams& grad) {
    const int n = x.channels;
    const double cnt = static_cast<double>(x.batch) * x.height * x.width;
    Tensor dx = Tensor::zeros(x.batch, x.channels, x.height, x.width);
    for (int c = 0; c < n; ++c) {
        const double inv_std = 1.0 / std::sqrt(cache.var[c] + bn.eps);
        double sum_up = 0.0, sum_up_xhat = 0.0;
        for (int m = 0; m < x.batch; ++m)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) {
                    const double u = up.at(m, c, y, xx);
                    const double xhat = (x.at(m, c, y, xx) - cache.mean[c]) * inv_std;
                    sum_up += u;
                    sum_up_xhat += u * xhat;
                }
        grad.gamma[c] += sum_up_xhat;
        grad.beta[c] += sum_up;
        const double g = p.gamma[c] * inv_std;
        for (int m = 0; m < x.batch; ++m)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) {
                    const double u = up.at(m, c, y, xx);
                    const double xhat = (x.at(m, c, y, xx) - cache.mean[c]) * inv_std;
                    dx.at(m, c, y, xx) = g * (u - (sum_up + xhat * sum_up_xhat) / cnt);
                }
    }
    return dx;
}

}  // namespace

void backward_plain(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                    const nn::ForwardCache& cache, const nn::Tensor& dlogits,
                    nn::ModelWeights& grads) {
    if (cache.layer_out.size() != spec.layers.size())
        throw std::invalid_argument("backward_plain: cache does not match spec");
    Tensor up = dlogits;
    for (std::size_t ii = spec.layers.size(); ii-- > 0;) {
        const nn::LayerSpec& layer = spec.layers[ii];
        const nn::LayerParams& params = weights.layers[ii];
        const Tensor& input = ii == 0 ? cache.input : cache.layer_out[ii - 1];

        if (const auto* conv = std::get_if<nn::Conv2d>(&layer)) {
            Tensor dx;
            nn::ConvParams dp;
            nn::conv2d_backward(input, *conv, std::get<nn::ConvParams>(params), up, &dx, &dp);
            auto& g = std::get<nn::ConvParams>(grads.layers[ii]);
            if (g.w.empty()) g.w.assign(dp.w.size(), 0.0);
            if (g.b.empty() && !dp.b.empty()) g.b.assign(dp.b.size(), 0.0);
            add_into(g.w, dp.w);
            if (!dp.b.empty()) add_into(g.b, dp.b);
            up = std::move(dx);
        } else if (const auto* bn = std::get_if<nn::BatchNorm>(&layer)) {
            const auto* bc = std::get_if<nn::BnCache>(&cache.aux[ii]);
            if (!bc) throw std::invalid_argument("backward_plain: missing batch-norm cache");
            up = batchnorm_backward(input, *bn, std::get<nn::BnParams>(params), *bc, up,
                                    std::get<nn::BnParams>(grads.layers[ii]));
        } else if (const auto* act = std::get_if<nn::Activation>(&layer)) {
            if (act->kind == nn::ActKind::relu) {
                up = nn::relu_grad_input(input, up);
            } else {
                const auto& poly = std::get<nn::ActParams>(params).poly;
                auto dcoeff = nn::grad_coeffs(poly, input, up);
                add_into(std::get<nn::ActParams>(grads.layers[ii]).poly.coeff, dcoeff);
                up = nn::grad_input(poly, input, up);
            }
        } else if (const auto* pool = std::get_if<nn::AvgPool>(&layer)) {
            Tensor dx = Tensor::zeros(input.batch, input.channels, input.height, input.width);
            const double inv = 1.0 / (pool->window * pool->window);
            for (int m = 0; m < dx.batch; ++m)
                for (int c = 0; c < dx.channels; ++c)
                    for (int y = 0; y < dx.height; ++y)
                        for (int x = 0; x < dx.width; ++x)
                            dx.at(m, c, y, x) = up.at(m, c, y / pool->window, x / pool->window) * inv;
            up = std::move(dx);
        } else if (std::holds_alternative<nn::GlobalAvgPool>(layer)) {
            Tensor dx = Tensor::zeros(input.batch, input.channels, input.height, input.width);
            const double inv = 1.0 / (static_cast<double>(input.height) * input.width);
            for (int m = 0; m < dx.batch; ++m)
                for (int c = 0; c < dx.channels; ++c)
                    for (int y = 0; y < dx.height; ++y)
                        for (int x = 0; x < dx.width; ++x)
                            dx.at(m, c, y, x) = up.at(m, c, 0, 0) * inv;
            up = std::move(dx);
        } else if (std::holds_alternative<nn::Affine>(layer)) {
            const auto& ap = std::get<nn::AffineParams>(params);
            auto& g = std::get<nn::AffineParams>(grads.layers[ii]);
            Tensor dx = up;
            for (int m = 0; m < up.batch; ++m)
                for (int c = 0; c < up.channels; ++c)
                    for (int y = 0; y < up.height; ++y)
                        for (int x = 0; x < up.width; ++x) {
                            const double u = up.at(m, c, y, x);
                            g.scale[c] += u * input.at(m, c, y, x);
                            g.shift[c] += u;
                            dx.at(m, c, y, x) = u * ap.scale[c];
                        }
            up = std::move(dx);
        } else {
            const auto& fire = std::get<nn::Fire>(layer);
            const auto& fp = std::get<nn::FireParams>(params);
            const auto* fc = std::get_if<nn::FireCache>(&cache.aux[ii]);
            if (!fc) throw std::invalid_argument("backward_plain: missing fire cache");
            auto& g = std::get<nn::FireParams>(grads.layers[ii]);

            // split upstream over the concatenated expand branches
            const int c1 = fire.expand1.out_ch;
            Tensor up1 = Tensor::zeros(up.batch, c1, up.height, up.width);
            Tensor up3 = Tensor::zeros(up.batch, fire.expand3.out_ch, up.height, up.width);
            for (int m = 0; m < up.batch; ++m) {
                for (int c = 0; c < c1; ++c)
                    for (int y = 0; y < up.height; ++y)
                        for (int x = 0; x < up.width; ++x) up1.at(m, c, y, x) = up.at(m, c, y, x);
                for (int c = 0; c < fire.expand3.out_ch; ++c)
                    for (int y = 0; y < up.height; ++y)
                        for (int x = 0; x < up.width; ++x) up3.at(m, c, y, x) = up.at(m, c1 + c, y, x);
            }

            Tensor dsq1, dsq3, dx;
            nn::ConvParams d_e1, d_e3, d_sq;
            nn::conv2d_backward(fc->squeeze_out, fire.expand1, fp.expand1, up1, &dsq1, &d_e1);
            nn::conv2d_backward(fc->squeeze_out, fire.expand3, fp.expand3, up3, &dsq3, &d_e3);
            for (std::size_t i = 0; i < dsq1.v.size(); ++i) dsq1.v[i] += dsq3.v[i];
            nn::conv2d_backward(input, fire.squeeze, fp.squeeze, dsq1, &dx, &d_sq);

            auto ensure_add = [](nn::ConvParams& dst, const nn::ConvParams& src) {
                if (dst.w.empty()) dst.w.assign(src.w.size(), 0.0);
                if (dst.b.empty() && !src.b.empty()) dst.b.assign(src.b.size(), 0.0);
                for (std::size_t i = 0; i < src.w.size(); ++i) dst.w[i] += src.w[i];
                for (std::size_t i = 0; i < src.b.size(); ++i) dst.b[i] += src.b[i];
            };
            ensure_add(g.expand1, d_e1);
            ensure_add(g.expand3, d_e3);
            ensure_add(g.squeeze, d_sq);
            up = std::move(dx);
        }
    }
}

}  // namespace beaa::train
