// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/nn/network.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace beaa::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;

struct ConvDims {
    int oh, ow, patch;  // patch = in_ch * k * k
};

ConvDims conv_dims(const Tensor& x, const Conv2d& c) {
    const int oh = (x.height + 2 * c.pad - c.ksize) / c.stride + 1;
    const int ow = (x.width + 2 * c.pad - c.ksize) / c.stride + 1;
    return {oh, ow, c.in_ch * c.ksize * c.ksize};
}

// column matrix (patch x oh*ow) for one image
void im2col(const Tensor& x, int m, const Conv2d& c, const ConvDims& d, RowMat& col) {
    col.resize(d.patch, d.oh * d.ow);
    for (int ic = 0; ic < c.in_ch; ++ic)
        for (int ky = 0; ky < c.ksize; ++ky)
            for (int kx = 0; kx < c.ksize; ++kx) {
                const int row = (ic * c.ksize + ky) * c.ksize + kx;
                for (int oy = 0; oy < d.oh; ++oy) {
                    const int iy = oy * c.stride - c.pad + ky;
                    for (int ox = 0; ox < d.ow; ++ox) {
                        const int ix = ox * c.stride - c.pad + kx;
                        const bool in = iy >= 0 && iy < x.height && ix >= 0 && ix < x.width;
                        col(row, oy * d.ow + ox) = in ? x.at(m, ic, iy, ix) : 0.0;
                    }
                }
            }
}

void col2im_accumulate(const RowMat& col, int m, const Conv2d& c, const ConvDims& d, Tensor& dx) {
    for (int ic = 0; ic < c.in_ch; ++ic)
        for (int ky = 0; ky < c.ksize; ++ky)
            for (int kx = 0; kx < c.ksize; ++kx) {
                const int row = (ic * c.ksize + ky) * c.ksize + kx;
                for (int oy = 0; oy < d.oh; ++oy) {
                    const int iy = oy * c.stride - c.pad + ky;
                    if (iy < 0 || iy >= dx.height) continue;
                    for (int ox = 0; ox < d.ow; ++ox) {
                        const int ix = ox * c.stride - c.pad + kx;
                        if (ix < 0 || ix >= dx.width) continue;
                        dx.at(m, ic, iy, ix) += col(row, oy * d.ow + ox);
                    }
                }
            }
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, const Conv2d& c, const ConvParams& p) {
    if (x.channels != c.in_ch) throw std::invalid_argument("conv2d: channel mismatch");
    if (p.w.size() != conv_weight_count(c)) throw std::invalid_argument("conv2d: weight count mismatch");
    const ConvDims d = conv_dims(x, c);
    Tensor out = Tensor::zeros(x.batch, c.out_ch, d.oh, d.ow);
    CMapMat wmat(p.w.data(), c.out_ch, d.patch);
    RowMat col;
    for (int m = 0; m < x.batch; ++m) {
        im2col(x, m, c, d, col);
        MapMat omat(out.v.data() + static_cast<std::size_t>(m) * out.chw(), c.out_ch, d.oh * d.ow);
        omat.noalias() = wmat * col;
        if (!p.b.empty())
            for (int oc = 0; oc < c.out_ch; ++oc) omat.row(oc).array() += p.b[oc];
    }
    return out;
}

void conv2d_backward(const Tensor& x, const Conv2d& c, const ConvParams& p, const Tensor& upstream,
                     Tensor* dx, ConvParams* dp) {
    const ConvDims d = conv_dims(x, c);
    if (upstream.channels != c.out_ch || upstream.height != d.oh || upstream.width != d.ow)
        throw std::invalid_argument("conv2d_backward: upstream shape mismatch");
    CMapMat wmat(p.w.data(), c.out_ch, d.patch);
    if (dp) {
        dp->w.assign(p.w.size(), 0.0);
        dp->b.assign(p.b.size(), 0.0);
    }
    if (dx) *dx = Tensor::zeros(x.batch, x.channels, x.height, x.width);

    RowMat col, dcol;
    MapMat dwmat(dp ? dp->w.data() : nullptr, dp ? c.out_ch : 0, dp ? d.patch : 0);
    for (int m = 0; m < x.batch; ++m) {
        CMapMat umat(upstream.v.data() + static_cast<std::size_t>(m) * upstream.chw(), c.out_ch,
                     d.oh * d.ow);
        if (dp) {
            im2col(x, m, c, d, col);
            dwmat.noalias() += umat * col.transpose();
            if (!p.b.empty())
                for (int oc = 0; oc < c.out_ch; ++oc) dp->b[oc] += umat.row(oc).sum();
        }
        if (dx) {
            dcol.noalias() = wmat.transpose() * umat;
            col2im_accumulate(dcol, m, c, d, *dx);
        }
    }
}

Tensor avg_pool(const Tensor& x, int window, int stride) {
    if (window < 1 || stride != window || x.height % window != 0 || x.width % window != 0)
        throw std::invalid_argument("avg_pool: window must tile the input");
    Tensor out = Tensor::zeros(x.batch, x.channels, x.height / window, x.width / window);
    const double inv = 1.0 / (window * window);
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c)
            for (int oy = 0; oy < out.height; ++oy)
                for (int ox = 0; ox < out.width; ++ox) {
                    double s = 0.0;
                    for (int ky = 0; ky < window; ++ky)
                        for (int kx = 0; kx < window; ++kx)
                            s += x.at(m, c, oy * window + ky, ox * window + kx);
                    out.at(m, c, oy, ox) = s * inv;
                }
    return out;
}

Tensor global_avg_pool(const Tensor& x) {
    Tensor out = Tensor::zeros(x.batch, x.channels, 1, 1);
    const double inv = 1.0 / (static_cast<double>(x.height) * x.width);
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c) {
            double s = 0.0;
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) s += x.at(m, c, y, xx);
            out.at(m, c, 0, 0) = s * inv;
        }
    return out;
}

namespace {

Tensor batchnorm_forward(const Tensor& x, const BatchNorm& bn, const BnParams& p, bool training,
                         BnCache* cache) {
    const int n = x.channels;
    if (p.gamma.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("bn: param size");
    std::vector<double> mean(n, 0.0), var(n, 0.0);
    if (training) {
        const double cnt = static_cast<double>(x.batch) * x.height * x.width;
        for (int m = 0; m < x.batch; ++m)
            for (int c = 0; c < n; ++c)
                for (int y = 0; y < x.height; ++y)
                    for (int xx = 0; xx < x.width; ++xx) mean[c] += x.at(m, c, y, xx);
        for (auto& v : mean) v /= cnt;
        for (int m = 0; m < x.batch; ++m)
            for (int c = 0; c < n; ++c)
                for (int y = 0; y < x.height; ++y)
                    for (int xx = 0; xx < x.width; ++xx) {
                        const double d = x.at(m, c, y, xx) - mean[c];
                        var[c] += d * d;
                    }
        for (auto& v : var) v /= cnt;
    } else {
        mean = p.running_mean;
        var = p.running_var;
    }
    if (cache) {
        cache->mean = mean;
        cache->var = var;
    }
    Tensor out = x;
    for (int c = 0; c < n; ++c) {
        const double inv_std = 1.0 / std::sqrt(var[c] + bn.eps);
        const double g = p.gamma[c] * inv_std;
        const double b = p.beta[c] - mean[c] * g;
        for (int m = 0; m < x.batch; ++m)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx)
                    out.at(m, c, y, xx) = g * x.at(m, c, y, xx) + b;
    }
    return out;
}

Tensor affine_forward(const Tensor& x, const AffineParams& p) {
    if (p.scale.size() != static_cast<std::size_t>(x.channels))
        throw std::invalid_argument("affine: param size");
    Tensor out = x;
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx)
                    out.at(m, c, y, xx) = p.scale[c] * x.at(m, c, y, xx) + p.shift[c];
    return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.batch != b.batch || a.height != b.height || a.width != b.width)
        throw std::invalid_argument("concat: spatial mismatch");
    Tensor out = Tensor::zeros(a.batch, a.channels + b.channels, a.height, a.width);
    for (int m = 0; m < a.batch; ++m) {
        for (int c = 0; c < a.channels; ++c)
            for (int y = 0; y < a.height; ++y)
                for (int x = 0; x < a.width; ++x) out.at(m, c, y, x) = a.at(m, c, y, x);
        for (int c = 0; c < b.channels; ++c)
            for (int y = 0; y < a.height; ++y)
                for (int x = 0; x < a.width; ++x) out.at(m, a.channels + c, y, x) = b.at(m, c, y, x);
    }
    return out;
}

}  // namespace

Tensor forward_plain(const NetworkSpec& spec, const ModelWeights& weights, const Tensor& input,
                     ForwardCache* cache, bool training) {
    if (input.channels != spec.in_channels || input.height != spec.in_height ||
        input.width != spec.in_width)
        throw std::invalid_argument("forward_plain: input shape mismatch");
    if (weights.layers.size() != spec.layers.size())
        throw std::invalid_argument("forward_plain: weights do not match spec");
    if (cache) {
        cache->input = input;
        cache->layer_out.clear();
        cache->aux.assign(spec.layers.size(), std::monostate{});
    }
    Tensor cur = input;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        const LayerParams& params = weights.layers[i];
        if (std::holds_alternative<Conv2d>(layer)) {
            cur = conv2d_forward(cur, std::get<Conv2d>(layer), std::get<ConvParams>(params));
        } else if (std::holds_alternative<BatchNorm>(layer)) {
            BnCache bc;
            cur = batchnorm_forward(cur, std::get<BatchNorm>(layer), std::get<BnParams>(params),
                                    training, cache ? &bc : nullptr);
            if (cache) cache->aux[i] = std::move(bc);
        } else if (std::holds_alternative<Activation>(layer)) {
            const auto& act = std::get<Activation>(layer);
            cur = act.kind == ActKind::relu ? relu(cur) : eval_poly(std::get<ActParams>(params).poly, cur);
        } else if (std::holds_alternative<AvgPool>(layer)) {
            const auto& p = std::get<AvgPool>(layer);
            cur = avg_pool(cur, p.window, p.stride);
        } else if (std::holds_alternative<GlobalAvgPool>(layer)) {
            cur = global_avg_pool(cur);
        } else if (std::holds_alternative<Affine>(layer)) {
            cur = affine_forward(cur, std::get<AffineParams>(params));
        } else {
            const auto& fire = std::get<Fire>(layer);
            const auto& fp = std::get<FireParams>(params);
            Tensor sq = conv2d_forward(cur, fire.squeeze, fp.squeeze);
            Tensor e1 = conv2d_forward(sq, fire.expand1, fp.expand1);
            Tensor e3 = conv2d_forward(sq, fire.expand3, fp.expand3);
            if (cache) cache->aux[i] = FireCache{sq};
            cur = concat_channels(e1, e3);
        }
        if (cache) cache->layer_out.push_back(cur);
    }
    return cur;
}

std::pair<NetworkSpec, ModelWeights> fold_batchnorm(const NetworkSpec& spec, const ModelWeights& weights) {
    NetworkSpec out_spec = spec;
    ModelWeights out_w = weights;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        if (!std::holds_alternative<BatchNorm>(spec.layers[i])) continue;
        const auto& bn = std::get<BatchNorm>(spec.layers[i]);
        const auto& p = std::get<BnParams>(weights.layers[i]);
        AffineParams ap;
        ap.scale.resize(p.gamma.size());
        ap.shift.resize(p.gamma.size());
        for (std::size_t c = 0; c < p.gamma.size(); ++c) {
            if (!(p.running_var[c] > 0.0))
                throw std::invalid_argument("fold_batchnorm: non-positive running variance");
            const double inv_std = 1.0 / std::sqrt(p.running_var[c] + bn.eps);
            ap.scale[c] = p.gamma[c] * inv_std;
            ap.shift[c] = p.beta[c] - p.running_mean[c] * ap.scale[c];
        }
        out_spec.layers[i] = Affine{};
        out_w.layers[i] = std::move(ap);
    }
    return {std::move(out_spec), std::move(out_w)};
}

NetworkSpec build_squeezenet_opt(int num_classes, int in_channels, int in_height, int in_width,
                                 ActKind act, Granularity granularity, const SqueezeNetOptConfig& cfg) {
    if (num_classes < 2) throw std::invalid_argument("build_squeezenet_opt: need >= 2 classes");
    NetworkSpec spec;
    spec.in_channels = in_channels;
    spec.in_height = in_height;
    spec.in_width = in_width;
    spec.num_classes = num_classes;

    auto conv_module = [&](int in_ch, int out_ch, int k, int pad) {
        spec.layers.push_back(Conv2d{in_ch, out_ch, k, 1, pad, true});
        spec.layers.push_back(Activation{act, granularity});
        spec.layers.push_back(BatchNorm{});
    };
    auto fire_module = [&](int in_ch, int squeeze, int expand) {
        Fire f;
        f.squeeze = Conv2d{in_ch, squeeze, 1, 1, 0, true};
        f.expand1 = Conv2d{squeeze, expand, 1, 1, 0, true};
        f.expand3 = Conv2d{squeeze, expand, 3, 1, 1, true};
        spec.layers.push_back(f);
    };

    conv_module(in_channels, cfg.conv1_out, 3, 1);            // Conv1
    spec.layers.push_back(AvgPool{2, 2});                     // Pool1
    fire_module(cfg.conv1_out, cfg.fire1_squeeze, cfg.fire1_expand);   // Fire1
    fire_module(2 * cfg.fire1_expand, cfg.fire2_squeeze, cfg.fire2_expand);  // Fire2
    spec.layers.push_back(AvgPool{2, 2});                     // Pool2
    conv_module(2 * cfg.fire2_expand, cfg.conv2_out, 3, 1);   // Conv2
    conv_module(cfg.conv2_out, cfg.conv3_out, 3, 1);          // Conv3
    conv_module(cfg.conv3_out, num_classes, 1, 0);            // Conv4
    spec.layers.push_back(GlobalAvgPool{});                   // Pool3

    spec.shapes();  // validate composition
    return spec;
}

namespace {

ConvParams init_conv(const Conv2d& c, Rng& rng) {
    ConvParams p;
    p.w.resize(conv_weight_count(c));
    const double limit = std::sqrt(6.0 / (static_cast<double>(c.in_ch) * c.ksize * c.ksize));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (auto& w : p.w) w = dist(rng);
    if (c.has_bias) p.b.assign(c.out_ch, 0.0);
    return p;
}

}  // namespace

ModelWeights init_weights(const NetworkSpec& spec, Rng& rng, double act_coeff_noise) {
    ModelWeights w;
    w.layers.reserve(spec.layers.size());
    Shape cur = spec.input_shape();
    for (const auto& layer : spec.layers) {
        if (std::holds_alternative<Conv2d>(layer)) {
            w.layers.emplace_back(init_conv(std::get<Conv2d>(layer), rng));
        } else if (std::holds_alternative<BatchNorm>(layer)) {
            BnParams p;
            p.gamma.assign(cur.c, 1.0);
            p.beta.assign(cur.c, 0.0);
            p.running_mean.assign(cur.c, 0.0);
            p.running_var.assign(cur.c, 1.0);
            w.layers.emplace_back(std::move(p));
        } else if (std::holds_alternative<Activation>(layer)) {
            const auto& a = std::get<Activation>(layer);
            if (a.kind == ActKind::relu) {
                w.layers.emplace_back(NoParams{});
            } else {
                ActParams p;
                p.poly = PolyActivation::identity(a.granularity, cur.c, cur.h, cur.w);
                if (act_coeff_noise > 0.0) {
                    std::normal_distribution<double> noise(0.0, act_coeff_noise);
                    for (auto& cf : p.poly.coeff) cf += noise(rng);
                }
                w.layers.emplace_back(std::move(p));
            }
        } else if (std::holds_alternative<Affine>(layer)) {
            AffineParams p;
            p.scale.assign(cur.c, 1.0);
            p.shift.assign(cur.c, 0.0);
            w.layers.emplace_back(std::move(p));
        } else if (std::holds_alternative<Fire>(layer)) {
            const auto& f = std::get<Fire>(layer);
            FireParams p;
            p.squeeze = init_conv(f.squeeze, rng);
            p.expand1 = init_conv(f.expand1, rng);
            p.expand3 = init_conv(f.expand3, rng);
            w.layers.emplace_back(std::move(p));
        } else {
            w.layers.emplace_back(NoParams{});
        }
        cur = layer_output_shape(layer, cur);
    }
    return w;
}

}  // namespace beaa::nn
