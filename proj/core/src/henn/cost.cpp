// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/henn/cost.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "beaa/henn/compiler.hpp"

namespace beaa::henn {

namespace {

double time_it(int reps, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

}  // namespace

OpTimings measure_op_timings(const he::HeBackend& backend, const he::KeySet& keys, int reps) {
    Rng rng(0x7177);
    std::vector<double> v(backend.params().slot_count(), 0.5);
    auto pt = backend.encode(v);
    auto ct = backend.encrypt(pt, keys.public_key, rng);
    auto ct2 = backend.encrypt(pt, keys.public_key, rng);
    OpTimings t;
    t.add_s = time_it(reps, [&] { (void)backend.add(ct, ct2); });
    t.add_plain_s = time_it(reps, [&] { (void)backend.add_plain(ct, pt); });
    t.cmult_s = time_it(reps, [&] { (void)backend.cmult(ct, backend.encode_scalar(0.5, backend.params().default_scale)); });
    t.mult_s = time_it(reps, [&] { (void)backend.mult(ct, ct2, keys.eval); });
    t.rescale_s = time_it(reps, [&] { (void)backend.rescale(backend.cmult(ct, pt)); }) - t.cmult_s;
    if (t.rescale_s < 0.0) t.rescale_s = 0.0;
    t.mod_drop_s = time_it(reps, [&] { (void)backend.mod_drop(ct); });
    if (!keys.rotation.steps.empty())
        t.rotate_s = time_it(reps, [&] { (void)backend.rotate(ct, keys.rotation.steps.front(), keys.rotation); });
    return t;
}

namespace {

OpCounts channelwise_counts(const nn::NetworkSpec& spec, int batch) {
    OpCounts c;
    nn::Shape shape = spec.input_shape();
    const auto m = static_cast<std::uint64_t>(batch);
    auto conv_counts = [&](const nn::Conv2d& cv) {
        const auto taps = static_cast<std::uint64_t>(cv.ksize) * cv.ksize;
        c.rot += m * cv.in_ch * (taps - 1);
        c.cmult += m * static_cast<std::uint64_t>(cv.out_ch) * cv.in_ch * taps;
        c.add += m * static_cast<std::uint64_t>(cv.out_ch) * (static_cast<std::uint64_t>(cv.in_ch) * taps - 1);
        c.add_plain += m * static_cast<std::uint64_t>(cv.out_ch);  // bias
        c.rescale += m * static_cast<std::uint64_t>(cv.out_ch);
    };
    for (const auto& layer : spec.layers) {
        if (const auto* cv = std::get_if<nn::Conv2d>(&layer)) {
            conv_counts(*cv);
        } else if (std::holds_alternative<nn::Activation>(layer)) {
            const auto packs = m * static_cast<std::uint64_t>(shape.c);
            c.mult += packs;
            c.cmult += 2 * packs;
            c.add += packs;
            c.add_plain += packs;
            c.rescale += 3 * packs;
            c.mod_drop += packs;
        } else if (std::holds_alternative<nn::Affine>(layer)) {
            const auto packs = m * static_cast<std::uint64_t>(shape.c);
            c.cmult += packs;
            c.add_plain += packs;
            c.rescale += packs;
        } else if (const auto* p = std::get_if<nn::AvgPool>(&layer)) {
            const auto packs = m * static_cast<std::uint64_t>(shape.c);
            const auto taps = static_cast<std::uint64_t>(p->window) * p->window;
            c.rot += packs * (taps - 1);
            c.add += packs * (taps - 1);
            c.cmult += packs;  // 1/w^2 and slot compaction mask
            c.rescale += packs;
        } else if (std::holds_alternative<nn::GlobalAvgPool>(layer)) {
            const auto packs = m * static_cast<std::uint64_t>(shape.c);
            const auto lg = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(shape.h) * shape.w)));
            c.rot += packs * lg;
            c.add += packs * lg;
            c.cmult += packs;
            c.rescale += packs;
        } else if (const auto* f = std::get_if<nn::Fire>(&layer)) {
            conv_counts(f->squeeze);
            conv_counts(f->expand1);
            conv_counts(f->expand3);
        }
        shape = nn::layer_output_shape(layer, shape);
    }
    return c;
}

int network_depth(const nn::NetworkSpec& spec) {
    // conv/affine stages cost one level, activations two, pooling none
    int depth = 0;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        if (std::holds_alternative<nn::Conv2d>(spec.layers[i])) depth += 1;
        else if (std::holds_alternative<nn::Fire>(spec.layers[i])) depth += 2;
        else if (std::holds_alternative<nn::Activation>(spec.layers[i])) depth += 2;
        else if (std::holds_alternative<nn::Affine>(spec.layers[i])) {
            const bool merged = i > 0 && std::holds_alternative<nn::Activation>(spec.layers[i - 1]);
            if (!merged) depth += 1;
        }
    }
    return depth;
}

}  // namespace

CostEstimate estimate_cost(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                           const he::HeParams& params, int batch, pack::Layout layout,
                           const OpTimings& t) {
    if (batch < 1) throw std::invalid_argument("estimate_cost: batch must be >= 1");
    CostEstimate est;
    est.layout = layout;
    est.batch = batch;
    if (layout == pack::Layout::element_wise) {
        HePlan plan = compile(spec, weights, params);
        est.counts = plan.counts;
        est.depth = plan.depth;
    } else {
        est.counts = channelwise_counts(spec, batch);
        est.depth = network_depth(spec);
    }
    est.predicted_total_s = static_cast<double>(est.counts.add) * t.add_s +
                            static_cast<double>(est.counts.add_plain) * t.add_plain_s +
                            static_cast<double>(est.counts.cmult) * t.cmult_s +
                            static_cast<double>(est.counts.mult) * t.mult_s +
                            static_cast<double>(est.counts.rescale) * t.rescale_s +
                            static_cast<double>(est.counts.mod_drop) * t.mod_drop_s +
                            static_cast<double>(est.counts.rot) * t.rotate_s;
    est.predicted_amortized_s = est.predicted_total_s / static_cast<double>(batch);
    return est;
}

}  // namespace beaa::henn
