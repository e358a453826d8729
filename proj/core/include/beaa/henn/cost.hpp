// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "beaa/he/backend.hpp"
#include "beaa/henn/plan.hpp"
#include "beaa/nn/network.hpp"
#include "beaa/packing.hpp"

namespace beaa::henn {

struct OpTimings {
    double add_s = 0.0;
    double add_plain_s = 0.0;
    double cmult_s = 0.0;
    double mult_s = 0.0;
    double rescale_s = 0.0;
    double rotate_s = 0.0;
    double mod_drop_s = 0.0;
};

/// Measures per-operation wall times on the given backend.
OpTimings measure_op_timings(const he::HeBackend& backend, const he::KeySet& keys, int reps = 5);

struct CostEstimate {
    pack::Layout layout = pack::Layout::element_wise;
    int batch = 0;
    OpCounts counts;
    int depth = 0;
    double predicted_total_s = 0.0;
    double predicted_amortized_s = 0.0;  // total / batch
};

/// Static operation counts and predicted times for one encrypted inference
/// of the whole batch.
///
/// Element-wise counts come from the compiled plan (exact; rotation count is
/// zero by construction). Channel-wise counts follow the analytic model of
/// rotation-based convolution over H*W-slot packs: each input channel is
/// rotated (k^2 - 1) times per conv, every (out, in, tap) needs one CMult,
/// pools rotate (w^2 - 1) times per pack, and the global pool reduces with
/// log2(H*W) rotations; that route is modeled only, not executed.
CostEstimate estimate_cost(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                           const he::HeParams& params, int batch, pack::Layout layout,
                           const OpTimings& timings);

}  // namespace beaa::henn
