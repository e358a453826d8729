// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "beaa/common.hpp"
#include "beaa/he/ntt.hpp"
#include "beaa/he/params.hpp"

namespace beaa::he {

/// Immutable per-parameter-set precomputation: NTT tables for every chain
/// prime and the special prime, plus the inverse tables used by rescaling
/// and mixed-radix (Garner) reconstruction.
class RingContext {
public:
    explicit RingContext(HeParams params);

    const HeParams& params() const { return params_; }
    std::uint32_t n() const { return params_.ring_degree; }
    std::size_t chain_size() const { return params_.modulus_chain.size(); }
    std::size_t special_index() const { return chain_size(); }
    bool has_special() const { return params_.special_prime != 0; }

    u64 prime(std::size_t idx) const;
    const NttTables& tables(std::size_t idx) const { return tables_[idx]; }

    // inv(q_a) mod q_b, both indices over chain+special
    u64 prime_inv(std::size_t a, std::size_t b) const { return prime_inv_[a * (chain_size() + 1) + b]; }

private:
    HeParams params_;
    std::vector<NttTables> tables_;
    std::vector<u64> prime_inv_;
};

/// Polynomial in RNS form over the chain primes [0..level], optionally
/// extended by the special prime. Component-major storage.
struct RnsPoly {
    int level = 0;
    bool with_special = false;
    bool ntt_form = true;
    std::vector<u64> data;

    std::size_t component_count() const { return static_cast<std::size_t>(level) + 1 + (with_special ? 1 : 0); }
    std::size_t prime_index(std::size_t comp, const RingContext& ctx) const {
        return comp <= static_cast<std::size_t>(level) ? comp : ctx.special_index();
    }
    std::span<u64> comp(std::size_t i, std::uint32_t n) { return {data.data() + i * n, n}; }
    std::span<const u64> comp(std::size_t i, std::uint32_t n) const { return {data.data() + i * n, n}; }

    bool operator==(const RnsPoly&) const = default;
};

RnsPoly poly_zero(const RingContext& ctx, int level, bool with_special, bool ntt_form);

// Sampling (coefficient-domain samplers return NTT form).
RnsPoly sample_uniform(const RingContext& ctx, int level, bool with_special, Rng& rng);
RnsPoly sample_ternary(const RingContext& ctx, int level, bool with_special, Rng& rng);
RnsPoly sample_gaussian(const RingContext& ctx, int level, bool with_special, Rng& rng);

// Signed-integer coefficient bridges.
RnsPoly poly_from_signed(const RingContext& ctx, std::span<const std::int64_t> coeffs, int level,
                         bool with_special, bool to_ntt);
// Exact mixed-radix reconstruction of signed coefficients, as doubles.
std::vector<double> poly_to_signed(const RingContext& ctx, const RnsPoly& p);

void poly_add_inplace(const RingContext& ctx, RnsPoly& a, const RnsPoly& b);
void poly_sub_inplace(const RingContext& ctx, RnsPoly& a, const RnsPoly& b);
void poly_neg_inplace(const RingContext& ctx, RnsPoly& a);
RnsPoly poly_mul(const RingContext& ctx, const RnsPoly& a, const RnsPoly& b);  // NTT forms
void poly_mul_scalar_inplace(const RingContext& ctx, RnsPoly& a, std::int64_t scalar);

void poly_ntt(const RingContext& ctx, RnsPoly& a);
void poly_intt(const RingContext& ctx, RnsPoly& a);

// Galois map X -> X^t on coefficient-form input, t odd mod 2n.
RnsPoly poly_automorphism(const RingContext& ctx, const RnsPoly& a, std::uint64_t t);

// Exact division by the top chain prime (round-to-nearest); input NTT form
// without special component; output one level lower, NTT form.
RnsPoly poly_rescale(const RingContext& ctx, const RnsPoly& a);
// Drop the top chain prime without dividing (modulus switch).
RnsPoly poly_mod_drop(const RingContext& ctx, const RnsPoly& a);
// Divide by the special prime (round-to-nearest), removing that component.
RnsPoly poly_mod_down_special(const RingContext& ctx, const RnsPoly& a);

}  // namespace beaa::he
