// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace beaa::he {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add_mod(u64 a, u64 b, u64 q) {
    u64 s = a + b;  // q < 2^63, no overflow
    return s >= q ? s - q : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) {
    return a >= b ? a - b : a + q - b;
}

inline u64 mul_mod(u64 a, u64 b, u64 q) {
    return static_cast<u64>((u128(a) * b) % q);
}

u64 pow_mod(u64 base, u64 exp, u64 q);
u64 inv_mod(u64 a, u64 q);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n);

// Primes p = 1 (mod 2*ring_degree), one per requested bit size, all distinct,
// chosen as the smallest qualifying primes above 2^bits so that a scale of
// 2^bits stays below every chain prime.
std::vector<u64> make_ntt_primes(std::uint32_t ring_degree, std::span<const int> bit_sizes);

// Order-2n root of unity mod q (q = 1 mod 2n required).
u64 find_primitive_2n_root(u64 q, std::uint32_t n);

}  // namespace beaa::he
