// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "beaa/he/encoder.hpp"
#include "test_util.hpp"

using namespace beaa;
using namespace beaa::he;

namespace {

std::shared_ptr<const RingContext> toy_ctx() {
    static auto ctx = std::make_shared<const RingContext>(HeParams::toy());
    return ctx;
}

}  // namespace

TEST_CASE("encode/decode roundtrip within encode tolerance") {
    CkksEncoder enc(toy_ctx());
    const double scale = HeParams::toy().default_scale;
    std::vector<double> v = {1.0, -0.5, 3.25, 0.125};
    auto back = enc.decode(enc.encode(v, scale), scale);
    CHECK(testutil::max_abs_diff(v, back) < Tolerances::encode);
    // padding slots decode to zero
    for (std::size_t i = v.size(); i < back.size(); ++i) CHECK(std::abs(back[i]) < Tolerances::encode);
}

TEST_CASE("zero vector encodes and decodes exactly") {
    CkksEncoder enc(toy_ctx());
    const double scale = HeParams::toy().default_scale;
    std::vector<double> z(4, 0.0);
    auto back = enc.decode(enc.encode(z, scale), scale);
    for (double x : back) CHECK(x == 0.0);
}

TEST_CASE("encode rejects oversized and non-finite input") {
    CkksEncoder enc(toy_ctx());
    const double scale = HeParams::toy().default_scale;
    std::vector<double> too_long(enc.slot_count() + 1, 1.0);
    CHECK_THROWS_AS(enc.encode(too_long, scale), std::invalid_argument);
    std::vector<double> nan = {std::nan("")};
    CHECK_THROWS_AS(enc.encode(nan, scale), std::invalid_argument);
    CHECK_THROWS_AS(enc.encode(std::vector<double>{1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("decode preserves slot order") {
    CkksEncoder enc(toy_ctx());
    const double scale = HeParams::toy().default_scale;
    std::vector<double> v(enc.slot_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i) - 3.0;
    auto back = enc.decode(enc.encode(v, scale), scale);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(back[i] - v[i]) < Tolerances::encode);
}

TEST_CASE("special-FFT decode matches the direct canonical-embedding oracle") {
    auto ctx = toy_ctx();
    CkksEncoder enc(ctx);
    const double scale = HeParams::toy().default_scale;
    Rng rng(31);
    std::vector<double> v(enc.slot_count());
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    for (auto& x : v) x = d(rng);

    RnsPoly poly = enc.encode(v, scale);
    auto coeffs = poly_to_signed(*ctx, poly);
    auto direct = testutil::direct_decode(coeffs, scale, ctx->n());
    auto fast = enc.decode(poly, scale);
    CHECK(testutil::max_abs_diff(direct, fast) < 1e-7);
    CHECK(testutil::max_abs_diff(direct, v) < Tolerances::encode);
}

TEST_CASE("scalar fast path equals replicated full encode") {
    auto ctx = toy_ctx();
    CkksEncoder enc(ctx);
    const double scale = HeParams::toy().default_scale;
    std::vector<double> rep(enc.slot_count(), -2.75);
    auto a = enc.decode(enc.encode_scalar(-2.75, scale), scale);
    auto b = enc.decode(enc.encode(rep, scale), scale);
    CHECK(testutil::max_abs_diff(a, b) < 1e-8);
    for (double x : a) CHECK(std::abs(x + 2.75) < Tolerances::encode);
}

TEST_CASE("galois exponent: X -> X^5 shifts slots left by one") {
    auto ctx = toy_ctx();
    CkksEncoder enc(ctx);
    const double scale = HeParams::toy().default_scale;
    std::vector<double> v(enc.slot_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);

    RnsPoly coeff = enc.encode(v, scale);
    poly_intt(*ctx, coeff);
    RnsPoly rot = poly_automorphism(*ctx, coeff, enc.galois_exponent(1));
    poly_ntt(*ctx, rot);
    auto back = enc.decode(rot, scale);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(back[i] - v[(i + 1) % v.size()]) < Tolerances::encode);
}
