// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "beaa/henn/plan.hpp"
#include "beaa/nn/network.hpp"

namespace beaa::henn {

/// Compiles a BatchNorm-folded, polynomial-activated network into a
/// homomorphic plan over an element-wise packed input grid.
///
/// Convolutions and folded affines become scalar cmult/add chains with one
/// rescale per stage; activations evaluate c1*x^2 + c2*x + c3 per cell in
/// two levels; average pooling turns into additions whose 1/window^2 factor
/// is absorbed by the neighbouring multiplicative stage, so pooling costs no
/// level. Affines that directly follow an activation fold into its
/// coefficients. No rotations are needed under element-wise packing.
HePlan compile(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
               const he::HeParams& params);

}  // namespace beaa::henn
