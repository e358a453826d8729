// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beaa/he/modmath.hpp"

namespace beaa::he {

/// Negacyclic number-theoretic transform over Z_q[X]/(X^n + 1).
///
/// forward() maps coefficients to evaluations at the odd powers of a
/// primitive 2n-th root of unity; pointwise products in that domain
/// realize negacyclic convolution.
class NttTables {
public:
    NttTables(u64 q, std::uint32_t n);

    u64 modulus() const { return q_; }
    std::uint32_t degree() const { return n_; }

    void forward(std::span<u64> a) const;
    void inverse(std::span<u64> a) const;

private:
    u64 q_;
    std::uint32_t n_;
    std::vector<u64> psi_br_;      // psi^bitrev(i), forward butterflies
    std::vector<u64> psi_inv_br_;  // psi^-bitrev(i), inverse butterflies
    std::vector<u64> psi_br_shoup_, psi_inv_br_shoup_;
    u64 n_inv_;
    u64 n_inv_shoup_;
};

}  // namespace beaa::he
