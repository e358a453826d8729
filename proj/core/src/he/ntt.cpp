// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/ntt.hpp"

#include <stdexcept>

namespace beaa::he {

namespace {

std::uint32_t bit_reverse(std::uint32_t v, int bits) {
    std::uint32_t r = 0;
    for (int i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

// Shoup modular multiplication: w_shoup = floor(w * 2^64 / q) precomputed,
// result x * w mod q with a single high multiply and conditional subtract.
inline u64 mul_mod_shoup(u64 x, u64 w, u64 w_shoup, u64 q) {
    const u64 hi = static_cast<u64>((u128(x) * w_shoup) >> 64);
    const u64 r = x * w - hi * q;  // wraps mod 2^64; result < 2q
    return r >= q ? r - q : r;
}

inline u64 shoup_of(u64 w, u64 q) { return static_cast<u64>((u128(w) << 64) / q); }

}  // namespace

NttTables::NttTables(u64 q, std::uint32_t n) : q_(q), n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("NttTables: n must be a power of two");
    if (q >= (1ULL << 62)) throw std::invalid_argument("NttTables: modulus too large");
    int log_n = 0;
    while ((1u << log_n) < n) ++log_n;

    const u64 psi = find_primitive_2n_root(q, n);
    const u64 psi_inv = inv_mod(psi, q);

    psi_br_.resize(n);
    psi_inv_br_.resize(n);
    psi_br_shoup_.resize(n);
    psi_inv_br_shoup_.resize(n);
    std::vector<u64> pow(n), pow_inv(n);
    u64 p = 1, pi = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        pow[i] = p;
        pow_inv[i] = pi;
        p = mul_mod(p, psi, q);
        pi = mul_mod(pi, psi_inv, q);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        psi_br_[i] = pow[bit_reverse(i, log_n)];
        psi_inv_br_[i] = pow_inv[bit_reverse(i, log_n)];
        psi_br_shoup_[i] = shoup_of(psi_br_[i], q);
        psi_inv_br_shoup_[i] = shoup_of(psi_inv_br_[i], q);
    }
    n_inv_ = inv_mod(n, q);
    n_inv_shoup_ = shoup_of(n_inv_, q);
}

void NttTables::forward(std::span<u64> a) const {
    const u64 q = q_;
    std::uint32_t t = n_;
    for (std::uint32_t m = 1; m < n_; m <<= 1) {
        t >>= 1;
        for (std::uint32_t i = 0; i < m; ++i) {
            const std::uint32_t j1 = 2 * i * t;
            const u64 s = psi_br_[m + i];
            const u64 s_shoup = psi_br_shoup_[m + i];
            for (std::uint32_t j = j1; j < j1 + t; ++j) {
                const u64 u = a[j];
                const u64 v = mul_mod_shoup(a[j + t], s, s_shoup, q);
                a[j] = add_mod(u, v, q);
                a[j + t] = sub_mod(u, v, q);
            }
        }
    }
}

void NttTables::inverse(std::span<u64> a) const {
    const u64 q = q_;
    std::uint32_t t = 1;
    for (std::uint32_t m = n_; m > 1; m >>= 1) {
        std::uint32_t j1 = 0;
        const std::uint32_t h = m >> 1;
        for (std::uint32_t i = 0; i < h; ++i) {
            const u64 s = psi_inv_br_[h + i];
            const u64 s_shoup = psi_inv_br_shoup_[h + i];
            for (std::uint32_t j = j1; j < j1 + t; ++j) {
                const u64 u = a[j];
                const u64 v = a[j + t];
                a[j] = add_mod(u, v, q);
                a[j + t] = mul_mod_shoup(sub_mod(u, v, q), s, s_shoup, q);
            }
            j1 += 2 * t;
        }
        t <<= 1;
    }
    for (auto& x : a) x = mul_mod_shoup(x, n_inv_, n_inv_shoup_, q);
}

}  // namespace beaa::he
