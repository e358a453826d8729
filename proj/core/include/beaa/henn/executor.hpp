// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "beaa/henn/plan.hpp"
#include "beaa/packing.hpp"

namespace beaa::henn {

struct ExecutionResult {
    pack::PackedCipherTensor logits;  // num_classes cells, slot i = image i's logit
    double wall_s = 0.0;
};

/// Runs a compiled plan over an element-wise packed, encrypted input.
/// Cells within a layer execute in parallel (they share no registers);
/// layer boundaries synchronize. Every instruction's runtime level and
/// scale are checked against the compile-time prediction.
ExecutionResult execute(const HePlan& plan, const pack::PackedCipherTensor& input,
                        const he::HeBackend& backend, const he::EvalKey& evk);

}  // namespace beaa::henn
