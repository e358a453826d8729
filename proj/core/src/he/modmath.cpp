// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/modmath.hpp"

#include <stdexcept>

namespace beaa::he {

u64 pow_mod(u64 base, u64 exp, u64 q) {
    u64 result = 1;
    base %= q;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    return result;
}

u64 inv_mod(u64 a, u64 q) {
    // q prime throughout this library
    if (a % q == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
    return pow_mod(a % q, q - 2, q);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Witness set proven sufficient for n < 2^64.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> make_ntt_primes(std::uint32_t ring_degree, std::span<const int> bit_sizes) {
    const u64 two_n = 2ULL * ring_degree;
    std::vector<u64> primes;
    primes.reserve(bit_sizes.size());
    for (int bits : bit_sizes) {
        if (bits < 20 || bits > 61) throw std::invalid_argument("make_ntt_primes: bit size out of range");
        u64 candidate = (1ULL << bits) + 1;
        // align to 1 mod 2n
        u64 rem = (candidate - 1) % two_n;
        if (rem != 0) candidate += two_n - rem;
        while (true) {
            bool taken = false;
            for (u64 p : primes) taken |= (p == candidate);
            if (!taken && is_prime(candidate)) break;
            candidate += two_n;
        }
        primes.push_back(candidate);
    }
    return primes;
}

u64 find_primitive_2n_root(u64 q, std::uint32_t n) {
    const u64 two_n = 2ULL * n;
    if ((q - 1) % two_n != 0) throw std::invalid_argument("find_primitive_2n_root: q != 1 mod 2n");
    const u64 cofactor = (q - 1) / two_n;
    for (u64 g = 2;; ++g) {
        u64 root = pow_mod(g, cofactor, q);
        // order exactly 2n <=> root^n = -1
        if (pow_mod(root, n, q) == q - 1) return root;
        if (g > 1000000) throw std::runtime_error("find_primitive_2n_root: no generator found");
    }
}

}  // namespace beaa::he
