// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "beaa/he/ring.hpp"

namespace beaa::he {

/// Canonical-embedding encoder: real slot vectors of length N/2 map to
/// integer polynomials in Z[X]/(X^N + 1) scaled by `scale`. Slot j sits on
/// the 2N-th root zeta^(5^j mod 2N), so the Galois map X -> X^5 shifts
/// slots left by one.
class CkksEncoder {
public:
    explicit CkksEncoder(std::shared_ptr<const RingContext> ctx);

    std::uint32_t slot_count() const { return ctx_->n() / 2; }

    // Full-chain-level NTT-form plaintext polynomial. Shorter inputs are
    // zero-padded; longer inputs are rejected.
    RnsPoly encode(std::span<const double> values, double scale) const;
    // Constant polynomial fast path (same value in every slot).
    RnsPoly encode_scalar(double value, double scale) const;
    std::vector<double> decode(const RnsPoly& poly, double scale) const;

    // Galois exponent moving slot contents left by `step` (cyclic).
    std::uint64_t galois_exponent(int step) const;

private:
    void fft(std::span<std::complex<double>> v) const;
    void fft_inv(std::span<std::complex<double>> v) const;

    std::shared_ptr<const RingContext> ctx_;
    std::vector<std::uint32_t> rot_group_;        // 5^j mod 2N
    std::vector<std::complex<double>> ksi_pows_;  // e^(2*pi*i*k/2N), k in [0, 2N]
};

}  // namespace beaa::he
