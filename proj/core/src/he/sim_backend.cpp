// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beaa/he/backend.hpp"

namespace beaa::he {

namespace {

/// Exact-arithmetic mirror of the lattice backend: slot values are held as
/// doubles in the value domain, level/scale bookkeeping follows the same
/// rules, no noise is added anywhere.
class SimBackend final : public HeBackend {
public:
    explicit SimBackend(HeParams params) : HeBackend(std::move(params)) {}

    std::string_view name() const override { return "sim"; }

    KeySet keygen(std::span<const int> rotation_steps, Rng& rng) const override {
        (void)rng;
        KeySet ks;
        ks.secret = {fp_, SimKey{}};
        ks.public_key = {fp_, SimKey{}};
        ks.eval = {fp_, SimKey{}};
        std::vector<int> steps_norm;
        const int slots = static_cast<int>(params_.slot_count());
        for (int raw : rotation_steps) {
            int k = ((raw % slots) + slots) % slots;
            if (k == 0) continue;
            if (std::find(steps_norm.begin(), steps_norm.end(), k) == steps_norm.end())
                steps_norm.push_back(k);
        }
        std::sort(steps_norm.begin(), steps_norm.end());
        ks.rotation = {fp_, std::move(steps_norm), SimKey{}};
        return ks;
    }

    Plaintext encode(std::span<const double> values, double scale) const override {
        if (values.size() > params_.slot_count())
            throw std::invalid_argument("encode: more values than slots");
        if (!(scale > 0.0)) throw std::invalid_argument("encode: scale must be positive");
        std::vector<double> v(params_.slot_count(), 0.0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) throw std::invalid_argument("encode: non-finite value");
            v[i] = values[i];
        }
        Plaintext pt;
        pt.scale = scale;
        pt.slot_count = params_.slot_count();
        pt.params_fp = fp_;
        pt.body = std::move(v);
        return pt;
    }

    Plaintext encode_scalar(double value, double scale) const override {
        if (!std::isfinite(value)) throw std::invalid_argument("encode: non-finite value");
        if (!(scale > 0.0)) throw std::invalid_argument("encode: scale must be positive");
        Plaintext pt;
        pt.scale = scale;
        pt.slot_count = params_.slot_count();
        pt.params_fp = fp_;
        pt.body = std::vector<double>(params_.slot_count(), value);
        return pt;
    }

    std::vector<double> decode(const Plaintext& pt) const override {
        check_fp(pt.params_fp, "decode");
        return std::get<std::vector<double>>(pt.body);
    }

    Ciphertext encrypt(const Plaintext& pt, const PublicKey& pk, Rng& rng) const override {
        (void)rng;
        check_fp(pt.params_fp, "encrypt plaintext");
        check_fp(pk.params_fp, "encrypt key");
        Ciphertext ct;
        ct.level = static_cast<int>(params_.modulus_chain.size()) - 1;
        ct.scale = pt.scale;
        ct.slot_count = pt.slot_count;
        ct.params_fp = fp_;
        ct.body = std::get<std::vector<double>>(pt.body);
        return ct;
    }

    Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk) const override {
        check_fp(ct.params_fp, "decrypt ciphertext");
        check_fp(sk.params_fp, "decrypt key");
        if (ct.level < 0) throw std::invalid_argument("decrypt: level exhausted");
        Plaintext pt;
        pt.scale = ct.scale;
        pt.slot_count = ct.slot_count;
        pt.params_fp = fp_;
        pt.body = std::get<std::vector<double>>(ct.body);
        return pt;
    }

    Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
        check_add_compatible(a, b);
        Ciphertext out = a;
        auto& ov = std::get<std::vector<double>>(out.body);
        const auto& bv = std::get<std::vector<double>>(b.body);
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
        return out;
    }

    Ciphertext add_plain(const Ciphertext& a, const Plaintext& p) const override {
        check_plain_compatible(a, p, /*need_scale_match=*/true);
        Ciphertext out = a;
        auto& ov = std::get<std::vector<double>>(out.body);
        const auto& pv = std::get<std::vector<double>>(p.body);
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += pv[i];
        return out;
    }

    Ciphertext cmult(const Ciphertext& a, const Plaintext& p) const override {
        check_plain_compatible(a, p, /*need_scale_match=*/false);
        Ciphertext out = a;
        auto& ov = std::get<std::vector<double>>(out.body);
        const auto& pv = std::get<std::vector<double>>(p.body);
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= pv[i];
        out.scale = a.scale * p.scale;
        return out;
    }

    Ciphertext mult(const Ciphertext& a, const Ciphertext& b, const EvalKey& evk) const override {
        check_fp(a.params_fp, "mult lhs");
        check_fp(b.params_fp, "mult rhs");
        check_fp(evk.params_fp, "mult evk");
        if (a.slot_count != b.slot_count) throw std::invalid_argument("mult: slot_count mismatch");
        if (a.level != b.level) throw std::invalid_argument("mult: level mismatch");
        Ciphertext out = a;
        auto& ov = std::get<std::vector<double>>(out.body);
        const auto& bv = std::get<std::vector<double>>(b.body);
        for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= bv[i];
        out.scale = a.scale * b.scale;
        return out;
    }

    Ciphertext rescale(const Ciphertext& a) const override {
        check_fp(a.params_fp, "rescale");
        if (a.level < 1) throw std::invalid_argument("rescale: level exhausted");
        Ciphertext out = a;
        out.level = a.level - 1;
        out.scale = a.scale / static_cast<double>(params_.modulus_chain[a.level]);
        return out;
    }

    Ciphertext mod_drop(const Ciphertext& a) const override {
        check_fp(a.params_fp, "mod_drop");
        if (a.level < 1) throw std::invalid_argument("mod_drop: level exhausted");
        Ciphertext out = a;
        out.level = a.level - 1;
        return out;
    }

    Ciphertext rotate(const Ciphertext& a, int k, const RotationKeys& keys) const override {
        check_fp(a.params_fp, "rotate ciphertext");
        check_fp(keys.params_fp, "rotate keys");
        const int slots = static_cast<int>(params_.slot_count());
        const int step = ((k % slots) + slots) % slots;
        if (step == 0) return a;
        if (!keys.covers(step))
            throw std::invalid_argument("rotate: no key for step " + std::to_string(step));
        Ciphertext out = a;
        auto& ov = std::get<std::vector<double>>(out.body);
        const auto& av = std::get<std::vector<double>>(a.body);
        for (std::size_t i = 0; i < ov.size(); ++i)
            ov[i] = av[(i + static_cast<std::size_t>(step)) % av.size()];
        return out;
    }

protected:
    Ciphertext raise_scale_integer(const Ciphertext& a, std::int64_t c) const override {
        check_fp(a.params_fp, "raise_scale_integer");
        Ciphertext out = a;  // value domain: unchanged
        out.scale = a.scale * static_cast<double>(c);
        return out;
    }
};

}  // namespace

std::unique_ptr<HeBackend> make_sim_backend(HeParams params) {
    return std::make_unique<SimBackend>(std::move(params));
}

}  // namespace beaa::he
