// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/params.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::he {

void HeParams::validate() const {
    if (ring_degree < 8 || (ring_degree & (ring_degree - 1)) != 0)
        throw std::invalid_argument("HeParams: ring_degree must be a power of two >= 8");
    if (modulus_chain.empty())
        throw std::invalid_argument("HeParams: modulus chain must be non-empty");
    if (default_scale <= 0.0)
        throw std::invalid_argument("HeParams: default_scale must be positive");
    for (u64 q : modulus_chain) {
        if (!is_prime(q)) throw std::invalid_argument("HeParams: chain entries must be prime");
        if ((q - 1) % (2ULL * ring_degree) != 0)
            throw std::invalid_argument("HeParams: chain primes must be 1 mod 2N");
        if (default_scale >= static_cast<double>(q))
            throw std::invalid_argument("HeParams: default_scale must be below every chain prime");
    }
    if (special_prime != 0) {
        if (!is_prime(special_prime) || (special_prime - 1) % (2ULL * ring_degree) != 0)
            throw std::invalid_argument("HeParams: special prime must be prime and 1 mod 2N");
    }
}

u64 HeParams::fingerprint() const {
    u64 h = 0xcbf29ce484222325ULL;
    auto mix = [&h](u64 v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(ring_degree);
    for (u64 q : modulus_chain) mix(q);
    mix(special_prime);
    mix(static_cast<u64>(std::llround(std::log2(default_scale) * 1048576.0)));
    return h;
}

namespace {

HeParams build(std::uint32_t n, int base_bits, int mid_bits, int levels, int special_bits,
               double scale, std::uint32_t lambda) {
    std::vector<int> bits;
    bits.push_back(base_bits);
    for (int i = 0; i < levels; ++i) bits.push_back(mid_bits);
    bits.push_back(special_bits);
    auto primes = make_ntt_primes(n, bits);
    HeParams p;
    p.ring_degree = n;
    p.special_prime = primes.back();
    primes.pop_back();
    p.modulus_chain = std::move(primes);
    p.default_scale = scale;
    p.security_lambda = lambda;
    p.validate();
    return p;
}

}  // namespace

HeParams HeParams::toy() {
    return build(32, 45, 30, 4, 45, std::ldexp(1.0, 30), 0);
}

HeParams HeParams::desk() {
    return build(4096, 55, 40, 10, 55, std::ldexp(1.0, 40), 0);
}

HeParams HeParams::desk_deep() {
    // enough levels for the full optimized SqueezeNet at a test-friendly N
    return build(4096, 55, 40, 16, 55, std::ldexp(1.0, 40), 0);
}

HeParams HeParams::paper() {
    // 55 + 16*38 + 57 = 720 bits of coefficient modulus; 16 levels covers the
    // default optimized SqueezeNet at channel/element granularity
    return build(32768, 55, 38, 16, 57, std::ldexp(1.0, 38), 128);
}

HeParams HeParams::preset(std::string_view name) {
    if (name == "toy") return toy();
    if (name == "desk") return desk();
    if (name == "desk-deep") return desk_deep();
    if (name == "paper") return paper();
    throw std::invalid_argument("HeParams: unknown preset '" + std::string(name) + "'");
}

}  // namespace beaa::he
