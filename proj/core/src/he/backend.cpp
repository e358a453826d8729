// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/backend.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::he {

bool RotationKeys::covers(int step_normalized) const {
    for (int s : steps)
        if (s == step_normalized) return true;
    return false;
}

HeBackend::HeBackend(HeParams params) : params_(std::move(params)) {
    params_.validate();
    fp_ = params_.fingerprint();
}

bool HeBackend::scales_match(double a, double b) {
    return std::abs(a / b - 1.0) <= Tolerances::scale_match_rel;
}

void HeBackend::check_fp(u64 fp, std::string_view what) const {
    if (fp != fp_) throw std::invalid_argument(std::string(what) + ": parameter mismatch");
}

void HeBackend::check_add_compatible(const Ciphertext& a, const Ciphertext& b) const {
    check_fp(a.params_fp, "add lhs");
    check_fp(b.params_fp, "add rhs");
    if (a.slot_count != b.slot_count) throw std::invalid_argument("add: slot_count mismatch");
    if (a.level != b.level) throw std::invalid_argument("add: level mismatch");
    if (!scales_match(a.scale, b.scale)) throw std::invalid_argument("add: scale mismatch");
}

void HeBackend::check_plain_compatible(const Ciphertext& a, const Plaintext& p,
                                       bool need_scale_match) const {
    check_fp(a.params_fp, "ciphertext");
    check_fp(p.params_fp, "plaintext");
    if (a.slot_count != p.slot_count) throw std::invalid_argument("plain op: slot_count mismatch");
    if (need_scale_match && !scales_match(a.scale, p.scale))
        throw std::invalid_argument("plain op: scale mismatch");
}

Ciphertext HeBackend::with_scale(Ciphertext ct, double target) const {
    if (!scales_match(ct.scale, target))
        throw std::invalid_argument("with_scale: relabel outside tolerance");
    ct.scale = target;
    return ct;
}

std::pair<Ciphertext, Ciphertext> HeBackend::align(Ciphertext a, Ciphertext b) const {
    if (b.level > a.level) {
        // Spend the last dropped prime on matching a's scale: multiply by
        // round(s_a * q / s_b) as an exact integer, then rescale by q.
        while (b.level > a.level + 1) b = mod_drop(b);
        const double q = static_cast<double>(params_.modulus_chain[b.level]);
        const double factor = a.scale * q / b.scale;
        const auto c = static_cast<std::int64_t>(std::llround(factor));
        if (c < 1 || std::abs(factor) > 9.0e18)
            throw std::invalid_argument("align: scale ratio not adjustable");
        b = rescale(raise_scale_integer(std::move(b), c));
    } else if (a.level > b.level) {
        auto [bb, aa] = align(std::move(b), std::move(a));
        return {std::move(aa), std::move(bb)};
    }
    b = with_scale(std::move(b), a.scale);
    return {std::move(a), std::move(b)};
}

std::unique_ptr<HeBackend> make_backend(std::string_view kind, HeParams params) {
    if (kind == "lattice") return make_lattice_backend(std::move(params));
    if (kind == "sim") return make_sim_backend(std::move(params));
    throw std::invalid_argument("make_backend: unknown backend '" + std::string(kind) + "'");
}

}  // namespace beaa::he
