// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/nn/activation.hpp"

#include <stdexcept>
#include <string>

namespace beaa::nn {

const char* to_string(Granularity g) {
    switch (g) {
        case Granularity::layer: return "layer";
        case Granularity::channel: return "channel";
        case Granularity::element: return "element";
    }
    return "?";
}

Granularity granularity_from_string(const std::string& s) {
    if (s == "layer") return Granularity::layer;
    if (s == "channel") return Granularity::channel;
    if (s == "element") return Granularity::element;
    throw std::invalid_argument("unknown granularity '" + s + "'");
}

PolyActivation PolyActivation::identity(Granularity g, int c, int h, int w) {
    PolyActivation act;
    act.granularity = g;
    act.channels = c;
    act.height = h;
    act.width = w;
    act.coeff.assign(3 * act.triple_count(), 0.0);
    for (std::size_t t = 0; t < act.triple_count(); ++t) act.coeff[3 * t + 1] = 1.0;  // p(x) = x
    return act;
}

std::size_t PolyActivation::triple_count() const {
    switch (granularity) {
        case Granularity::layer: return 1;
        case Granularity::channel: return static_cast<std::size_t>(channels);
        case Granularity::element: return static_cast<std::size_t>(channels) * height * width;
    }
    return 0;
}

std::size_t PolyActivation::triple_index(int c, int y, int x) const {
    switch (granularity) {
        case Granularity::layer: return 0;
        case Granularity::channel: return static_cast<std::size_t>(c);
        case Granularity::element:
            return (static_cast<std::size_t>(c) * height + y) * width + x;
    }
    return 0;
}

void PolyActivation::check_shape(const Tensor& x) const {
    if (x.channels != channels || x.height != height || x.width != width)
        throw std::invalid_argument("PolyActivation: input shape mismatch");
    if (coeff.size() != 3 * triple_count())
        throw std::invalid_argument("PolyActivation: coefficient count mismatch");
}

Tensor eval_poly(const PolyActivation& act, const Tensor& x) {
    act.check_shape(x);
    Tensor out = x;
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) {
                    const double* t = act.triple(act.triple_index(c, y, xx));
                    const double v = x.at(m, c, y, xx);
                    out.at(m, c, y, xx) = (t[0] * v + t[1]) * v + t[2];
                }
    return out;
}

std::vector<double> grad_coeffs(const PolyActivation& act, const Tensor& x, const Tensor& upstream) {
    act.check_shape(x);
    if (!x.same_shape(upstream)) throw std::invalid_argument("grad_coeffs: upstream shape mismatch");
    std::vector<double> g(act.coeff.size(), 0.0);
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) {
                    const std::size_t t = act.triple_index(c, y, xx);
                    const double v = x.at(m, c, y, xx);
                    const double u = upstream.at(m, c, y, xx);
                    g[3 * t + 0] += u * v * v;
                    g[3 * t + 1] += u * v;
                    g[3 * t + 2] += u;  // constant term trains with unit derivative
                }
    return g;
}

Tensor grad_input(const PolyActivation& act, const Tensor& x, const Tensor& upstream) {
    act.check_shape(x);
    if (!x.same_shape(upstream)) throw std::invalid_argument("grad_input: upstream shape mismatch");
    Tensor out = x;
    for (int m = 0; m < x.batch; ++m)
        for (int c = 0; c < x.channels; ++c)
            for (int y = 0; y < x.height; ++y)
                for (int xx = 0; xx < x.width; ++xx) {
                    const double* t = act.triple(act.triple_index(c, y, xx));
                    out.at(m, c, y, xx) = (2.0 * t[0] * x.at(m, c, y, xx) + t[1]) * upstream.at(m, c, y, xx);
                }
    return out;
}

Tensor relu(const Tensor& x) {
    Tensor out = x;
    for (auto& v : out.v) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor relu_grad_input(const Tensor& x, const Tensor& upstream) {
    if (!x.same_shape(upstream)) throw std::invalid_argument("relu_grad_input: shape mismatch");
    Tensor out = upstream;
    for (std::size_t i = 0; i < out.v.size(); ++i)
        if (x.v[i] <= 0.0) out.v[i] = 0.0;
    return out;
}

std::pair<std::uint64_t, std::uint64_t> count_params(Granularity g, int n, int h, int w) {
    if (n < 1 || h < 1 || w < 1) throw std::invalid_argument("count_params: non-positive dims");
    const auto un = static_cast<std::uint64_t>(n);
    const auto uhw = static_cast<std::uint64_t>(h) * static_cast<std::uint64_t>(w);
    switch (g) {
        case Granularity::layer: return {3, un};
        case Granularity::channel: return {3 * un, un};
        case Granularity::element: return {3 * un * uhw, un * uhw};
    }
    throw std::invalid_argument("count_params: bad granularity");
}

}  // namespace beaa::nn
