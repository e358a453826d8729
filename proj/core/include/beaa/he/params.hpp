// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "beaa/he/modmath.hpp"

namespace beaa::he {

/// Accuracy bounds the backends are tested against, at the desk preset.
struct Tolerances {
    static constexpr double encode = 1e-6;
    static constexpr double fresh_noise = 1e-4;
    static constexpr double per_level = 1e-3;
    // Scale metadata lives in IEEE doubles; "equal scale" on add means equal
    // up to this relative slack, which separates real scale bugs (ratios of
    // order a chain prime) from double rounding (~1e-16 per op).
    static constexpr double scale_match_rel = 1e-9;
};

struct HeParams {
    std::uint32_t ring_degree = 0;          // N, power of two >= 8
    std::vector<u64> modulus_chain;         // q_0 (base) .. q_L; rescale drops from the top
    u64 special_prime = 0;                  // key-switching prime, 0 = keys unavailable
    double default_scale = 0.0;
    std::uint32_t security_lambda = 0;      // informational only
    double gaussian_stddev = 3.2;

    std::uint32_t slot_count() const { return ring_degree / 2; }
    int max_level() const { return static_cast<int>(modulus_chain.size()) - 1; }

    void validate() const;  // throws std::invalid_argument
    u64 fingerprint() const;
    bool operator==(const HeParams&) const = default;

    // Presets. "desk" is the test default; "paper" mirrors the reference
    // large-scale configuration (N = 32768, 720-bit chain incl. special).
    static HeParams toy();    // N=32,  4 levels, fast unit tests
    static HeParams desk();   // N=4096, 10 levels
    static HeParams desk_deep();  // N=4096, 16 levels (full model end-to-end)
    static HeParams paper();  // N=32768, 15 levels
    static HeParams preset(std::string_view name);
};

}  // namespace beaa::he
