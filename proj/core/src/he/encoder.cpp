// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/encoder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beaa::he {

namespace {

void array_bit_reverse(std::span<std::complex<double>> v) {
    const std::size_t n = v.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
}

}  // namespace

CkksEncoder::CkksEncoder(std::shared_ptr<const RingContext> ctx) : ctx_(std::move(ctx)) {
    const std::uint64_t m = 2ULL * ctx_->n();
    const std::uint32_t slots = ctx_->n() / 2;
    rot_group_.resize(slots);
    std::uint64_t five = 1;
    for (std::uint32_t i = 0; i < slots; ++i) {
        rot_group_[i] = static_cast<std::uint32_t>(five);
        five = (five * 5) % m;
    }
    ksi_pows_.resize(m + 1);
    for (std::uint64_t k = 0; k <= m; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        ksi_pows_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void CkksEncoder::fft(std::span<std::complex<double>> v) const {
    const std::size_t size = v.size();
    const std::uint64_t m = 2ULL * ctx_->n();
    array_bit_reverse(v);
    for (std::size_t len = 2; len <= size; len <<= 1) {
        const std::size_t lenh = len >> 1;
        const std::size_t lenq = len << 2;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < lenh; ++j) {
                const std::size_t idx = (rot_group_[j] % lenq) * (m / lenq);
                auto u = v[i + j];
                auto w = v[i + j + lenh] * ksi_pows_[idx];
                v[i + j] = u + w;
                v[i + j + lenh] = u - w;
            }
        }
    }
}

void CkksEncoder::fft_inv(std::span<std::complex<double>> v) const {
    const std::size_t size = v.size();
    const std::uint64_t m = 2ULL * ctx_->n();
    for (std::size_t len = size; len >= 2; len >>= 1) {
        const std::size_t lenh = len >> 1;
        const std::size_t lenq = len << 2;
        for (std::size_t i = 0; i < size; i += len) {
            for (std::size_t j = 0; j < lenh; ++j) {
                const std::size_t idx = (lenq - (rot_group_[j] % lenq)) * (m / lenq);
                auto u = v[i + j] + v[i + j + lenh];
                auto w = (v[i + j] - v[i + j + lenh]) * ksi_pows_[idx];
                v[i + j] = u;
                v[i + j + lenh] = w;
            }
        }
    }
    array_bit_reverse(v);
    for (auto& x : v) x /= static_cast<double>(size);
}

RnsPoly CkksEncoder::encode(std::span<const double> values, double scale) const {
    const std::uint32_t slots = slot_count();
    if (values.size() > slots) throw std::invalid_argument("encode: more values than slots");
    if (!(scale > 0.0)) throw std::invalid_argument("encode: scale must be positive");
    std::vector<std::complex<double>> v(slots, {0.0, 0.0});
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw std::invalid_argument("encode: non-finite value");
        v[i] = {values[i], 0.0};
    }
    fft_inv(v);
    const std::uint32_t n = ctx_->n();
    std::vector<std::int64_t> coeffs(n, 0);
    constexpr double kCoeffLimit = 4.6e18;  // stay inside int64
    for (std::uint32_t i = 0; i < slots; ++i) {
        const double re = v[i].real() * scale;
        const double im = v[i].imag() * scale;
        if (std::abs(re) > kCoeffLimit || std::abs(im) > kCoeffLimit)
            throw std::invalid_argument("encode: scaled value too large");
        coeffs[i] = std::llround(re);
        coeffs[i + slots] = std::llround(im);
    }
    return poly_from_signed(*ctx_, coeffs, static_cast<int>(ctx_->chain_size()) - 1, false, true);
}

RnsPoly CkksEncoder::encode_scalar(double value, double scale) const {
    if (!std::isfinite(value)) throw std::invalid_argument("encode: non-finite value");
    if (!(scale > 0.0)) throw std::invalid_argument("encode: scale must be positive");
    const double scaled = value * scale;
    if (std::abs(scaled) > 4.6e18) throw std::invalid_argument("encode: scaled value too large");
    const std::int64_t c0 = std::llround(scaled);
    // constant polynomial: every NTT slot of every component equals c0 mod q
    RnsPoly p = poly_zero(*ctx_, static_cast<int>(ctx_->chain_size()) - 1, false, true);
    const std::uint32_t n = ctx_->n();
    for (std::size_t c = 0; c < p.component_count(); ++c) {
        const u64 q = ctx_->prime(p.prime_index(c, *ctx_));
        const u64 r = c0 >= 0 ? static_cast<u64>(c0) % q : q - (static_cast<u64>(-c0) % q);
        for (auto& x : p.comp(c, n)) x = r;
    }
    return p;
}

std::vector<double> CkksEncoder::decode(const RnsPoly& poly, double scale) const {
    const std::uint32_t slots = slot_count();
    std::vector<double> coeffs = poly_to_signed(*ctx_, poly);
    std::vector<std::complex<double>> v(slots);
    for (std::uint32_t i = 0; i < slots; ++i)
        v[i] = {coeffs[i] / scale, coeffs[i + slots] / scale};
    fft(v);
    std::vector<double> out(slots);
    for (std::uint32_t i = 0; i < slots; ++i) out[i] = v[i].real();
    return out;
}

std::uint64_t CkksEncoder::galois_exponent(int step) const {
    const std::uint64_t m = 2ULL * ctx_->n();
    const std::uint32_t slots = slot_count();
    std::uint64_t s = ((step % static_cast<int>(slots)) + slots) % slots;
    std::uint64_t e = 1;
    for (std::uint64_t i = 0; i < s; ++i) e = (e * 5) % m;
    return e;
}

}  // namespace beaa::he
