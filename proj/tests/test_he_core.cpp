// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "beaa/he/ring.hpp"
#include "test_util.hpp"

using namespace beaa;
using namespace beaa::he;

TEST_CASE("modular arithmetic basics") {
    CHECK(pow_mod(3, 5, 97) == 243 % 97);
    CHECK(mul_mod(inv_mod(7, 97), 7, 97) == 1);
    CHECK(is_prime(1048577) == false);
    CHECK(is_prime(2) == true);
    CHECK(is_prime(1) == false);
    CHECK(is_prime(0xffffffff00000001ULL));  // 2^64 - 2^32 + 1
}

TEST_CASE("ntt prime generation gives 1 mod 2N primes above the bit target") {
    const std::uint32_t n = 1024;
    const int bits[] = {30, 30, 40};
    auto primes = make_ntt_primes(n, bits);
    REQUIRE(primes.size() == 3);
    CHECK(primes[0] != primes[1]);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        CHECK(is_prime(primes[i]));
        CHECK((primes[i] - 1) % (2 * n) == 0);
        CHECK(primes[i] > (1ULL << bits[i]));
    }
}

TEST_CASE("primitive 2n-th root has order exactly 2n") {
    auto primes = make_ntt_primes(64, std::vector<int>{30});
    const u64 q = primes[0];
    const u64 root = find_primitive_2n_root(q, 64);
    CHECK(pow_mod(root, 64, q) == q - 1);
    CHECK(pow_mod(root, 128, q) == 1);
}

TEST_CASE("negacyclic NTT: roundtrip and convolution against direct sum") {
    for (std::uint32_t n : {16u, 256u}) {
        auto primes = make_ntt_primes(n, std::vector<int>{40});
        const u64 q = primes[0];
        NttTables t(q, n);
        Rng rng(n);
        std::vector<u64> x(n), y(n);
        for (auto& v : x) v = rng() % q;
        for (auto& v : y) v = rng() % q;

        std::vector<u64> xr = x;
        t.forward(xr);
        t.inverse(xr);
        CHECK(xr == x);

        // negacyclic convolution oracle
        std::vector<u64> ref(n, 0);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                const u64 prod = mul_mod(x[i], y[j], q);
                const std::uint32_t k = i + j;
                if (k < n)
                    ref[k] = add_mod(ref[k], prod, q);
                else
                    ref[k - n] = sub_mod(ref[k - n], prod, q);
            }
        std::vector<u64> xf = x, yf = y;
        t.forward(xf);
        t.forward(yf);
        for (std::uint32_t i = 0; i < n; ++i) xf[i] = mul_mod(xf[i], yf[i], q);
        t.inverse(xf);
        CHECK(xf == ref);
    }
}

TEST_CASE("params validation") {
    HeParams p = HeParams::toy();
    CHECK_NOTHROW(p.validate());
    CHECK(p.slot_count() == p.ring_degree / 2);

    HeParams bad = p;
    bad.ring_degree = 24;  // not a power of two
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.modulus_chain.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.default_scale = static_cast<double>(bad.modulus_chain[0]) * 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_THROWS_AS(HeParams::preset("nope"), std::invalid_argument);
}

TEST_CASE("preset fingerprints are distinct and stable") {
    CHECK(HeParams::toy().fingerprint() == HeParams::toy().fingerprint());
    CHECK(HeParams::toy().fingerprint() != HeParams::desk().fingerprint());
}

TEST_CASE("mixed-radix signed reconstruction is exact for small integers") {
    RingContext ctx(HeParams::toy());
    const std::uint32_t n = ctx.n();
    Rng rng(9);
    std::vector<std::int64_t> coeffs(n);
    std::uniform_int_distribution<std::int64_t> d(-(1LL << 45), 1LL << 45);
    for (auto& c : coeffs) c = d(rng);
    auto poly = poly_from_signed(ctx, coeffs, ctx.params().max_level(), false, true);
    auto back = poly_to_signed(ctx, poly);
    for (std::uint32_t i = 0; i < n; ++i)
        CHECK(back[i] == static_cast<double>(coeffs[i]));
}

TEST_CASE("automorphism X -> X^t permutes with negacyclic sign") {
    RingContext ctx(HeParams::toy());
    const std::uint32_t n = ctx.n();
    // x = X (coefficient 1 at index 1): X -> X^t must move it to index t
    RnsPoly p = poly_zero(ctx, 0, false, false);
    for (std::size_t c = 0; c < p.component_count(); ++c) p.comp(c, n)[1] = 1;
    RnsPoly q = poly_automorphism(ctx, p, 5);
    CHECK(q.comp(0, n)[5] == 1);
    // X^(n-1) -> X^(5(n-1) mod 2n) with sign flip when crossing X^n
    RnsPoly r = poly_zero(ctx, 0, false, false);
    for (std::size_t c = 0; c < r.component_count(); ++c) r.comp(c, n)[n - 1] = 1;
    RnsPoly s = poly_automorphism(ctx, r, 5);
    const std::uint64_t e = (5ULL * (n - 1)) % (2 * n);
    const u64 q0 = ctx.prime(0);
    if (e < n)
        CHECK(s.comp(0, n)[e] == 1);
    else
        CHECK(s.comp(0, n)[e - n] == q0 - 1);
}
