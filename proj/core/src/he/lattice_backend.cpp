// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beaa/he/backend.hpp"

namespace beaa::he {

namespace {

// First (level+1) chain components of a chain+special polynomial.
RnsPoly prefix(const RingContext& ctx, const RnsPoly& p, int level) {
    if (level > p.level) throw std::invalid_argument("prefix: level above source");
    RnsPoly out;
    out.level = level;
    out.with_special = false;
    out.ntt_form = p.ntt_form;
    out.data.assign(p.data.begin(), p.data.begin() + (static_cast<std::size_t>(level) + 1) * ctx.n());
    return out;
}

class LatticeBackend final : public HeBackend {
public:
    explicit LatticeBackend(HeParams params)
        : HeBackend(std::move(params)),
          ctx_(std::make_shared<const RingContext>(params_)),
          encoder_(ctx_) {
        if (!ctx_->has_special())
            throw std::invalid_argument("lattice backend: special prime required for evaluation keys");
    }

    std::string_view name() const override { return "lattice"; }

    KeySet keygen(std::span<const int> rotation_steps, Rng& rng) const override {
        const int top = static_cast<int>(ctx_->chain_size()) - 1;
        KeySet ks;

        LatticeSecretKey sk;
        sk.s = sample_ternary(*ctx_, top, true, rng);

        LatticePublicKey pk;
        RnsPoly s_chain = prefix(*ctx_, sk.s, top);
        pk.a = sample_uniform(*ctx_, top, false, rng);
        RnsPoly e = sample_gaussian(*ctx_, top, false, rng);
        pk.b = poly_mul(*ctx_, pk.a, s_chain);
        poly_neg_inplace(*ctx_, pk.b);
        poly_add_inplace(*ctx_, pk.b, e);

        LatticeEvalKey evk;
        RnsPoly s2 = poly_mul(*ctx_, sk.s, sk.s);
        evk.ksk = make_ksk(s2, sk.s, rng);

        std::map<int, LatticeRotKey> rot;
        std::vector<int> steps_norm;
        const int slots = static_cast<int>(params_.slot_count());
        for (int raw : rotation_steps) {
            int k = ((raw % slots) + slots) % slots;
            if (k == 0) continue;
            if (rot.count(k)) continue;
            LatticeRotKey rk;
            rk.galois = encoder_.galois_exponent(k);
            RnsPoly s_coeff = sk.s;
            poly_intt(*ctx_, s_coeff);
            RnsPoly s_rot = poly_automorphism(*ctx_, s_coeff, rk.galois);
            poly_ntt(*ctx_, s_rot);
            rk.ksk = make_ksk(s_rot, sk.s, rng);
            rot.emplace(k, std::move(rk));
            steps_norm.push_back(k);
        }
        std::sort(steps_norm.begin(), steps_norm.end());

        ks.secret = {fp_, std::move(sk)};
        ks.public_key = {fp_, std::move(pk)};
        ks.eval = {fp_, std::move(evk)};
        ks.rotation = {fp_, std::move(steps_norm), std::move(rot)};
        return ks;
    }

    Plaintext encode(std::span<const double> values, double scale) const override {
        Plaintext pt;
        pt.scale = scale;
        pt.slot_count = params_.slot_count();
        pt.params_fp = fp_;
        pt.body = encoder_.encode(values, scale);
        return pt;
    }

    Plaintext encode_scalar(double value, double scale) const override {
        Plaintext pt;
        pt.scale = scale;
        pt.slot_count = params_.slot_count();
        pt.params_fp = fp_;
        pt.body = encoder_.encode_scalar(value, scale);
        return pt;
    }

    std::vector<double> decode(const Plaintext& pt) const override {
        check_fp(pt.params_fp, "decode");
        return encoder_.decode(std::get<RnsPoly>(pt.body), pt.scale);
    }

    Ciphertext encrypt(const Plaintext& pt, const PublicKey& pk, Rng& rng) const override {
        check_fp(pt.params_fp, "encrypt plaintext");
        check_fp(pk.params_fp, "encrypt key");
        const auto& key = std::get<LatticePublicKey>(pk.body);
        const int top = static_cast<int>(ctx_->chain_size()) - 1;

        RnsPoly v = sample_ternary(*ctx_, top, false, rng);
        RnsPoly e0 = sample_gaussian(*ctx_, top, false, rng);
        RnsPoly e1 = sample_gaussian(*ctx_, top, false, rng);

        LatticeCt body;
        body.c0 = poly_mul(*ctx_, key.b, v);
        poly_add_inplace(*ctx_, body.c0, e0);
        poly_add_inplace(*ctx_, body.c0, std::get<RnsPoly>(pt.body));
        body.c1 = poly_mul(*ctx_, key.a, v);
        poly_add_inplace(*ctx_, body.c1, e1);

        Ciphertext ct;
        ct.level = top;
        ct.scale = pt.scale;
        ct.slot_count = pt.slot_count;
        ct.params_fp = fp_;
        ct.body = std::move(body);
        return ct;
    }

    Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk) const override {
        check_fp(ct.params_fp, "decrypt ciphertext");
        check_fp(sk.params_fp, "decrypt key");
        if (ct.level < 0) throw std::invalid_argument("decrypt: level exhausted");
        const auto& body = std::get<LatticeCt>(ct.body);
        RnsPoly s = prefix(*ctx_, std::get<LatticeSecretKey>(sk.body).s, ct.level);
        RnsPoly m = poly_mul(*ctx_, body.c1, s);
        poly_add_inplace(*ctx_, m, body.c0);
        Plaintext pt;
        pt.scale = ct.scale;
        pt.slot_count = ct.slot_count;
        pt.params_fp = fp_;
        pt.body = std::move(m);
        return pt;
    }

    Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
        check_add_compatible(a, b);
        Ciphertext out = a;
        auto& ob = std::get<LatticeCt>(out.body);
        const auto& bb = std::get<LatticeCt>(b.body);
        poly_add_inplace(*ctx_, ob.c0, bb.c0);
        poly_add_inplace(*ctx_, ob.c1, bb.c1);
        return out;
    }

    Ciphertext add_plain(const Ciphertext& a, const Plaintext& p) const override {
        check_plain_compatible(a, p, /*need_scale_match=*/true);
        Ciphertext out = a;
        auto& ob = std::get<LatticeCt>(out.body);
        poly_add_inplace(*ctx_, ob.c0, prefix(*ctx_, std::get<RnsPoly>(p.body), a.level));
        return out;
    }

    Ciphertext cmult(const Ciphertext& a, const Plaintext& p) const override {
        check_plain_compatible(a, p, /*need_scale_match=*/false);
        Ciphertext out = a;
        auto& ob = std::get<LatticeCt>(out.body);
        RnsPoly pp = prefix(*ctx_, std::get<RnsPoly>(p.body), a.level);
        ob.c0 = poly_mul(*ctx_, ob.c0, pp);
        ob.c1 = poly_mul(*ctx_, ob.c1, pp);
        out.scale = a.scale * p.scale;
        return out;
    }

    Ciphertext mult(const Ciphertext& a, const Ciphertext& b, const EvalKey& evk) const override {
        check_fp(a.params_fp, "mult lhs");
        check_fp(b.params_fp, "mult rhs");
        check_fp(evk.params_fp, "mult evk");
        if (a.slot_count != b.slot_count) throw std::invalid_argument("mult: slot_count mismatch");
        if (a.level != b.level) throw std::invalid_argument("mult: level mismatch");
        const auto& ab = std::get<LatticeCt>(a.body);
        const auto& bb = std::get<LatticeCt>(b.body);

        RnsPoly d0 = poly_mul(*ctx_, ab.c0, bb.c0);
        RnsPoly d1 = poly_mul(*ctx_, ab.c0, bb.c1);
        poly_add_inplace(*ctx_, d1, poly_mul(*ctx_, ab.c1, bb.c0));
        RnsPoly d2 = poly_mul(*ctx_, ab.c1, bb.c1);

        auto [ks0, ks1] = key_switch(d2, std::get<LatticeEvalKey>(evk.body).ksk);
        poly_add_inplace(*ctx_, d0, ks0);
        poly_add_inplace(*ctx_, d1, ks1);

        Ciphertext out;
        out.level = a.level;
        out.scale = a.scale * b.scale;
        out.slot_count = a.slot_count;
        out.params_fp = fp_;
        out.body = LatticeCt{std::move(d0), std::move(d1)};
        return out;
    }

    Ciphertext rescale(const Ciphertext& a) const override {
        check_fp(a.params_fp, "rescale");
        if (a.level < 1) throw std::invalid_argument("rescale: level exhausted");
        const auto& ab = std::get<LatticeCt>(a.body);
        Ciphertext out;
        out.level = a.level - 1;
        out.scale = a.scale / static_cast<double>(params_.modulus_chain[a.level]);
        out.slot_count = a.slot_count;
        out.params_fp = fp_;
        out.body = LatticeCt{poly_rescale(*ctx_, ab.c0), poly_rescale(*ctx_, ab.c1)};
        return out;
    }

    Ciphertext mod_drop(const Ciphertext& a) const override {
        check_fp(a.params_fp, "mod_drop");
        if (a.level < 1) throw std::invalid_argument("mod_drop: level exhausted");
        const auto& ab = std::get<LatticeCt>(a.body);
        Ciphertext out = a;
        out.level = a.level - 1;
        out.body = LatticeCt{poly_mod_drop(*ctx_, ab.c0), poly_mod_drop(*ctx_, ab.c1)};
        return out;
    }

    Ciphertext rotate(const Ciphertext& a, int k, const RotationKeys& keys) const override {
        check_fp(a.params_fp, "rotate ciphertext");
        check_fp(keys.params_fp, "rotate keys");
        const int slots = static_cast<int>(params_.slot_count());
        const int step = ((k % slots) + slots) % slots;
        if (step == 0) return a;
        const auto& table = std::get<std::map<int, LatticeRotKey>>(keys.body);
        auto it = table.find(step);
        if (it == table.end()) throw std::invalid_argument("rotate: no key for step " + std::to_string(step));
        const LatticeRotKey& rk = it->second;

        const auto& ab = std::get<LatticeCt>(a.body);
        RnsPoly c0 = ab.c0;
        RnsPoly c1 = ab.c1;
        poly_intt(*ctx_, c0);
        poly_intt(*ctx_, c1);
        c0 = poly_automorphism(*ctx_, c0, rk.galois);
        c1 = poly_automorphism(*ctx_, c1, rk.galois);
        poly_ntt(*ctx_, c0);

        auto [ks0, ks1] = key_switch(c1, rk.ksk);
        poly_add_inplace(*ctx_, ks0, c0);

        Ciphertext out = a;
        out.body = LatticeCt{std::move(ks0), std::move(ks1)};
        return out;
    }

protected:
    Ciphertext raise_scale_integer(const Ciphertext& a, std::int64_t c) const override {
        check_fp(a.params_fp, "raise_scale_integer");
        Ciphertext out = a;
        auto& ob = std::get<LatticeCt>(out.body);
        poly_mul_scalar_inplace(*ctx_, ob.c0, c);
        poly_mul_scalar_inplace(*ctx_, ob.c1, c);
        out.scale = a.scale * static_cast<double>(c);
        return out;
    }

private:
    // KSK encrypting P * source under target: per chain prime j,
    // b_j = -a_j * target + e_j + (P mod q_j) * source on component j.
    KswKey make_ksk(const RnsPoly& source, const RnsPoly& target, Rng& rng) const {
        const int top = static_cast<int>(ctx_->chain_size()) - 1;
        const u64 p_special = params_.special_prime;
        KswKey ksk;
        ksk.b.reserve(ctx_->chain_size());
        ksk.a.reserve(ctx_->chain_size());
        const std::uint32_t n = ctx_->n();
        for (std::size_t j = 0; j < ctx_->chain_size(); ++j) {
            RnsPoly aj = sample_uniform(*ctx_, top, true, rng);
            RnsPoly ej = sample_gaussian(*ctx_, top, true, rng);
            RnsPoly bj = poly_mul(*ctx_, aj, target);
            poly_neg_inplace(*ctx_, bj);
            poly_add_inplace(*ctx_, bj, ej);
            const u64 qj = ctx_->prime(j);
            const u64 p_mod = p_special % qj;
            auto bj_j = bj.comp(j, n);
            auto src_j = source.comp(j, n);
            for (std::uint32_t i = 0; i < n; ++i)
                bj_j[i] = add_mod(bj_j[i], mul_mod(p_mod, src_j[i], qj), qj);
            ksk.b.push_back(std::move(bj));
            ksk.a.push_back(std::move(aj));
        }
        return ksk;
    }

    // Applies a KSK to d (chain components [0..level]), returning the pair
    // (sum_j digit_j * b_j, sum_j digit_j * a_j) / P over d's primes.
    std::pair<RnsPoly, RnsPoly> key_switch(const RnsPoly& d, const KswKey& ksk) const {
        const std::uint32_t n = ctx_->n();
        const int level = d.level;
        const std::size_t special = ctx_->special_index();

        RnsPoly acc0 = poly_zero(*ctx_, level, true, true);
        RnsPoly acc1 = poly_zero(*ctx_, level, true, true);
        const std::size_t ncomp = acc0.component_count();

        // products accumulate unreduced in 128 bits; level+1 terms of < 2^124
        // each stay below 2^128
        std::vector<u128> wide0(ncomp * n, 0), wide1(ncomp * n, 0);
        std::vector<std::int64_t> centered(n);
        std::vector<u64> digit(n), lifted(n);
        for (int j = 0; j <= level; ++j) {
            // digit j in centered coefficient form
            auto src = d.comp(static_cast<std::size_t>(j), n);
            std::copy(src.begin(), src.end(), digit.begin());
            const u64 qj = ctx_->prime(static_cast<std::size_t>(j));
            if (d.ntt_form) ctx_->tables(static_cast<std::size_t>(j)).inverse(digit);
            for (std::uint32_t i = 0; i < n; ++i) {
                centered[i] = digit[i] > qj / 2 ? static_cast<std::int64_t>(digit[i]) - static_cast<std::int64_t>(qj)
                                                : static_cast<std::int64_t>(digit[i]);
            }
            for (std::size_t c = 0; c < ncomp; ++c) {
                const std::size_t pi = acc0.prime_index(c, *ctx_);
                const u64 qt = ctx_->prime(pi);
                for (std::uint32_t i = 0; i < n; ++i) {
                    const std::int64_t v = centered[i];
                    lifted[i] = v >= 0 ? static_cast<u64>(v) % qt : qt - (static_cast<u64>(-v) % qt);
                }
                ctx_->tables(pi).forward(lifted);
                // ksk polys carry the full chain + special; pick the matching prime
                const std::size_t ksk_comp = (pi == special) ? ctx_->chain_size() : pi;
                auto kb = ksk.b[static_cast<std::size_t>(j)].comp(ksk_comp, n);
                auto ka = ksk.a[static_cast<std::size_t>(j)].comp(ksk_comp, n);
                u128* w0 = wide0.data() + c * n;
                u128* w1 = wide1.data() + c * n;
                for (std::uint32_t i = 0; i < n; ++i) {
                    w0[i] += u128(lifted[i]) * kb[i];
                    w1[i] += u128(lifted[i]) * ka[i];
                }
            }
        }
        for (std::size_t c = 0; c < ncomp; ++c) {
            const u64 qt = ctx_->prime(acc0.prime_index(c, *ctx_));
            auto a0 = acc0.comp(c, n);
            auto a1 = acc1.comp(c, n);
            const u128* w0 = wide0.data() + c * n;
            const u128* w1 = wide1.data() + c * n;
            for (std::uint32_t i = 0; i < n; ++i) {
                a0[i] = static_cast<u64>(w0[i] % qt);
                a1[i] = static_cast<u64>(w1[i] % qt);
            }
        }
        return {poly_mod_down_special(*ctx_, acc0), poly_mod_down_special(*ctx_, acc1)};
    }

    std::shared_ptr<const RingContext> ctx_;
    CkksEncoder encoder_;
};

}  // namespace

std::unique_ptr<HeBackend> make_lattice_backend(HeParams params) {
    return std::make_unique<LatticeBackend>(std::move(params));
}

}  // namespace beaa::he
