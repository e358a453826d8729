// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beaa/nn/tensor.hpp"

namespace beaa::nn {

enum class Granularity { layer, channel, element };

const char* to_string(Granularity g);
Granularity granularity_from_string(const std::string& s);

/// Trainable degree-2 polynomial activation p(x) = c1*x^2 + c2*x + c3 with
/// one coefficient triple per layer, per channel, or per feature element.
/// Coefficients are stored as consecutive (c1, c2, c3) triples.
struct PolyActivation {
    Granularity granularity = Granularity::layer;
    int channels = 0, height = 0, width = 0;  // input shape of the activation layer
    std::vector<double> coeff;

    static PolyActivation identity(Granularity g, int c, int h, int w);

    std::size_t triple_count() const;
    // Triple serving element (c, y, x) under this granularity.
    std::size_t triple_index(int c, int y, int x) const;
    double* triple(std::size_t t) { return coeff.data() + 3 * t; }
    const double* triple(std::size_t t) const { return coeff.data() + 3 * t; }

    void check_shape(const Tensor& x) const;
};

Tensor eval_poly(const PolyActivation& act, const Tensor& x);

/// d(loss)/d(coeff): dp/dc1 = x^2, dp/dc2 = x, dp/dc3 = 1, chained with the
/// upstream gradient and summed over the batch and over all elements the
/// triple is shared across.
std::vector<double> grad_coeffs(const PolyActivation& act, const Tensor& x, const Tensor& upstream);

/// d(loss)/dx = (2*c1*x + c2) * upstream, elementwise.
Tensor grad_input(const PolyActivation& act, const Tensor& x, const Tensor& upstream);

Tensor relu(const Tensor& x);
Tensor relu_grad_input(const Tensor& x, const Tensor& upstream);

/// (number of trainable coefficients, number of distinct activation
/// functions) for a layer of shape n x H x W.
std::pair<std::uint64_t, std::uint64_t> count_params(Granularity g, int n, int h, int w);

}  // namespace beaa::nn
