// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "test_util.hpp"

using namespace beaa;
using namespace beaa::he;
using testutil::max_abs_diff;

namespace {

struct BackendFixture {
    std::unique_ptr<HeBackend> be;
    KeySet keys;
    Rng rng{42};

    explicit BackendFixture(const char* kind, HeParams params = HeParams::toy(),
                            std::vector<int> steps = {1, 3}) {
        be = make_backend(kind, std::move(params));
        keys = be->keygen(steps, rng);
    }
    Ciphertext enc(const std::vector<double>& v) {
        return be->encrypt(be->encode(v), keys.public_key, rng);
    }
    std::vector<double> dec(const Ciphertext& ct) { return be->decrypt_decode(ct, keys.secret); }
};

const char* kKinds[] = {"sim", "lattice"};

}  // namespace

TEST_CASE("keygen produces requested rotation keys and is seed-deterministic") {
    for (const char* kind : kKinds) {
        auto be = make_backend(kind, HeParams::toy());
        Rng r1(7), r2(7);
        auto k1 = be->keygen(std::vector<int>{1}, r1);
        auto k2 = be->keygen(std::vector<int>{1}, r2);
        CHECK(k1.rotation.steps == std::vector<int>{1});
        if (std::string(kind) == "lattice") {
            CHECK(std::get<LatticeSecretKey>(k1.secret.body) == std::get<LatticeSecretKey>(k2.secret.body));
            CHECK(std::get<LatticePublicKey>(k1.public_key.body) ==
                  std::get<LatticePublicKey>(k2.public_key.body));
        }
    }
    // invalid params rejected
    HeParams bad = HeParams::toy();
    bad.ring_degree = 12;
    CHECK_THROWS_AS(make_backend("lattice", bad), std::invalid_argument);
}

TEST_CASE("keygen at N=16 with a two-prime chain yields one rotation key") {
    HeParams p;
    p.ring_degree = 16;
    const int bits[] = {40, 40, 40};
    auto primes = make_ntt_primes(16, bits);
    p.modulus_chain = {primes[0], primes[1]};
    p.special_prime = primes[2];
    p.default_scale = std::ldexp(1.0, 30);
    for (const char* kind : kKinds) {
        auto be = make_backend(kind, p);
        Rng rng(2);
        auto keys = be->keygen(std::vector<int>{1}, rng);
        CHECK(keys.rotation.steps.size() == 1);
        auto ct = be->encrypt(be->encode(std::vector<double>{1, 2, 3}), keys.public_key, rng);
        CHECK(testutil::max_abs_diff(be->decrypt_decode(ct, keys.secret), std::vector<double>{1, 2, 3}) <
              1e-6);
    }
}

TEST_CASE("decrypt rejects a negative-level ciphertext") {
    BackendFixture f("lattice");
    auto ct = f.enc({1});
    // level 0 is still a valid state
    while (ct.level > 0) ct = f.be->mod_drop(ct);
    CHECK_NOTHROW(f.be->decrypt(ct, f.keys.secret));
    ct.level = -1;
    CHECK_THROWS_AS(f.be->decrypt(ct, f.keys.secret), std::invalid_argument);
}

TEST_CASE("encrypt/decrypt roundtrips") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        std::vector<double> v = {1, 2, 3, 4};
        auto ct = f.enc(v);
        CHECK(ct.level == f.be->params().max_level());
        auto back = f.dec(ct);
        const double tol = std::string(kind) == "sim" ? 0.0 : Tolerances::fresh_noise;
        CHECK(max_abs_diff(v, back) <= tol);
    }
}

TEST_CASE("two lattice encryptions of one plaintext differ (randomized encryption)") {
    BackendFixture f("lattice");
    auto pt = f.be->encode(std::vector<double>{1, 2, 3});
    auto c1 = f.be->encrypt(pt, f.keys.public_key, f.rng);
    auto c2 = f.be->encrypt(pt, f.keys.public_key, f.rng);
    CHECK(std::get<LatticeCt>(c1.body).c0.data != std::get<LatticeCt>(c2.body).c0.data);
}

TEST_CASE("add: slot-wise sum, identity on zeros, metadata preserved") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({1, 2});
        auto b = f.enc({3, 4});
        auto s = f.be->add(a, b);
        CHECK(s.level == a.level);
        CHECK(s.scale == doctest::Approx(a.scale));
        CHECK(max_abs_diff(f.dec(s), std::vector<double>{4, 6}) < Tolerances::fresh_noise);

        auto z = f.enc(std::vector<double>(f.be->params().slot_count(), 0.0));
        CHECK(max_abs_diff(f.dec(f.be->add(a, z)), f.dec(a)) < Tolerances::fresh_noise);
    }
}

TEST_CASE("add enforces level, scale and slot-count equality") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({1});
        auto b = f.be->mod_drop(f.enc({2}));
        CHECK_THROWS_AS(f.be->add(a, b), std::invalid_argument);
        auto c = f.be->cmult(f.enc({2}), f.be->encode(std::vector<double>{1.0}));
        CHECK_THROWS_AS(f.be->add(a, c), std::invalid_argument);  // scale mismatch
    }
}

TEST_CASE("add_plain: slot-wise sum with plaintext, no level consumed") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({1, 1});
        auto s = f.be->add_plain(a, f.be->encode(std::vector<double>{5, 7}));
        CHECK(s.level == a.level);
        CHECK(s.scale == a.scale);
        CHECK(max_abs_diff(f.dec(s), std::vector<double>{6, 8}) < Tolerances::fresh_noise);
        auto id = f.be->add_plain(a, f.be->encode(std::vector<double>{0, 0}));
        CHECK(max_abs_diff(f.dec(id), f.dec(a)) < Tolerances::fresh_noise);
    }
}

TEST_CASE("cmult: product with plaintext, scale multiplies, rescale restores") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({1, 2, 3});
        auto p = f.be->encode(std::vector<double>{2, 2, 2});
        auto m = f.be->cmult(a, p);
        CHECK(m.scale == doctest::Approx(a.scale * p.scale));
        CHECK(m.level == a.level);
        auto r = f.be->rescale(m);
        CHECK(r.level == a.level - 1);
        CHECK(max_abs_diff(f.dec(r), std::vector<double>{2, 4, 6}) < Tolerances::per_level);

        auto ones = f.be->rescale(f.be->cmult(a, f.be->encode(std::vector<double>{1, 1, 1})));
        CHECK(max_abs_diff(f.dec(ones), f.dec(a)) < Tolerances::per_level);
    }
}

TEST_CASE("mult: slot-wise product with relinearization") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({2});
        auto b = f.enc({3});
        auto m = f.be->rescale(f.be->mult(a, b, f.keys.eval));
        CHECK(max_abs_diff(f.dec(m), std::vector<double>{6}) < Tolerances::per_level);

        auto sq = f.be->rescale(f.be->mult(f.enc({1, 2, 3}), f.enc({1, 2, 3}), f.keys.eval));
        CHECK(max_abs_diff(f.dec(sq), std::vector<double>{1, 4, 9}) < Tolerances::per_level);

        auto ones = f.enc(std::vector<double>(4, 1.0));
        auto ct = f.enc({5, -3, 0.5, 2});
        auto id = f.be->rescale(f.be->mult(ct, ones, f.keys.eval));
        CHECK(max_abs_diff(f.dec(id), f.dec(ct)) < Tolerances::per_level);

        // mismatched evk rejected
        auto other = make_backend(kind, HeParams::desk());
        Rng r2(1);
        auto other_keys = other->keygen({}, r2);
        CHECK_THROWS_AS(f.be->mult(a, b, other_keys.eval), std::invalid_argument);
    }
}

TEST_CASE("rescale: level decrements, scale divides by dropped prime, values survive") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto a = f.enc({1.5, -2.5});
        auto m = f.be->cmult(a, f.be->encode(std::vector<double>{3, 3}));
        auto r = f.be->rescale(m);
        const auto& chain = f.be->params().modulus_chain;
        CHECK(r.level == m.level - 1);
        CHECK(r.scale == doctest::Approx(m.scale / static_cast<double>(chain[m.level])));
        CHECK(max_abs_diff(f.dec(r), std::vector<double>{4.5, -7.5}) < Tolerances::per_level);

        // exhaust the chain
        Ciphertext cur = a;
        while (cur.level > 0) cur = f.be->mod_drop(cur);
        CHECK_THROWS_AS(f.be->rescale(cur), std::invalid_argument);
        CHECK_THROWS_AS(f.be->mod_drop(cur), std::invalid_argument);
    }
}

TEST_CASE("rotate: left shift by k slots, identity cases, missing key") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        const std::uint32_t slots = f.be->params().slot_count();
        std::vector<double> v(slots, 0.0);
        v[0] = 1;
        v[1] = 2;
        v[2] = 3;
        v[3] = 4;
        auto ct = f.enc(v);

        auto r1 = f.be->rotate(ct, 1, f.keys.rotation);
        std::vector<double> expect(slots);
        for (std::uint32_t i = 0; i < slots; ++i) expect[i] = v[(i + 1) % slots];
        CHECK(max_abs_diff(f.dec(r1), expect) < Tolerances::per_level);
        CHECK(max_abs_diff(f.dec(r1), std::vector<double>{2, 3, 4}) < Tolerances::per_level);

        auto r0 = f.be->rotate(ct, 0, f.keys.rotation);
        CHECK(max_abs_diff(f.dec(r0), v) < Tolerances::per_level);

        CHECK_THROWS_AS(f.be->rotate(ct, 2, f.keys.rotation), std::invalid_argument);
    }
}

TEST_CASE("rotate by k then slots-k composes to the identity") {
    for (const char* kind : kKinds) {
        HeParams p = HeParams::toy();
        const int slots = static_cast<int>(p.slot_count());
        BackendFixture f(kind, p, {3, slots - 3});
        Rng vr(5);
        std::vector<double> v(slots);
        std::uniform_real_distribution<double> d(-2, 2);
        for (auto& x : v) x = d(vr);
        auto ct = f.enc(v);
        auto back = f.be->rotate(f.be->rotate(ct, 3, f.keys.rotation), slots - 3, f.keys.rotation);
        CHECK(max_abs_diff(f.dec(back), v) < 10 * Tolerances::per_level);
    }
}

TEST_CASE("decrypt after one add / one mult+rescale stays within stated tolerances") {
    BackendFixture f("lattice");
    Rng vr(11);
    std::uniform_real_distribution<double> d(-8, 8);
    std::vector<double> a(f.be->params().slot_count()), b(a.size());
    for (auto& x : a) x = d(vr);
    for (auto& x : b) x = d(vr);
    auto ca = f.enc(a), cb = f.enc(b);

    std::vector<double> sum(a.size()), prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum[i] = a[i] + b[i];
        prod[i] = a[i] * b[i];
    }
    CHECK(max_abs_diff(f.dec(f.be->add(ca, cb)), sum) < Tolerances::fresh_noise);
    CHECK(max_abs_diff(f.dec(f.be->rescale(f.be->mult(ca, cb, f.keys.eval))), prod) <
          Tolerances::per_level);
}

TEST_CASE("align reconciles level and scale for adds") {
    for (const char* kind : kKinds) {
        BackendFixture f(kind);
        auto x = f.enc({2, 4});
        auto sq = f.be->rescale(f.be->mult(x, x, f.keys.eval));
        auto [a, b] = f.be->align(sq, x);
        CHECK(a.level == b.level);
        CHECK(a.scale == b.scale);
        auto s = f.be->add(a, b);  // x^2 + x
        CHECK(max_abs_diff(f.dec(s), std::vector<double>{6, 20}) < 10 * Tolerances::per_level);
        // symmetric argument order
        auto [c, dd] = f.be->align(x, sq);
        CHECK(c.level == dd.level);
        auto s2 = f.be->add(c, dd);
        CHECK(max_abs_diff(f.dec(s2), std::vector<double>{6, 20}) < 10 * Tolerances::per_level);
    }
}

TEST_CASE("metadata discipline is checkable without decryption") {
    BackendFixture f("lattice");
    auto a = f.enc({1});
    const auto& chain = f.be->params().modulus_chain;
    auto p = f.be->encode(std::vector<double>{2});
    auto chainct = f.be->rescale(f.be->cmult(a, p));
    CHECK(chainct.level == a.level - 1);
    CHECK(chainct.scale == (a.scale * p.scale) / static_cast<double>(chain[a.level]));
    auto dropped = f.be->mod_drop(a);
    CHECK(dropped.level == a.level - 1);
    CHECK(dropped.scale == a.scale);
}

TEST_CASE("params mismatch across backends is rejected") {
    BackendFixture toy("lattice", HeParams::toy());
    BackendFixture desk("lattice", HeParams::desk());
    auto ct = toy.enc({1});
    CHECK_THROWS_AS(desk.be->decrypt(ct, desk.keys.secret), std::invalid_argument);
    CHECK_THROWS_AS(desk.be->add(ct, ct), std::invalid_argument);
}
