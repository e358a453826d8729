// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/ring.hpp"

#include <cmath>
#include <stdexcept>

namespace beaa::he {

RingContext::RingContext(HeParams params) : params_(std::move(params)) {
    params_.validate();
    const std::size_t total = chain_size() + (has_special() ? 1 : 0);
    tables_.reserve(total);
    for (std::size_t i = 0; i < chain_size(); ++i)
        tables_.emplace_back(params_.modulus_chain[i], params_.ring_degree);
    if (has_special()) tables_.emplace_back(params_.special_prime, params_.ring_degree);

    const std::size_t np = chain_size() + 1;
    prime_inv_.assign(np * np, 0);
    for (std::size_t a = 0; a < total; ++a) {
        for (std::size_t b = 0; b < total; ++b) {
            if (a == b) continue;
            prime_inv_[a * np + b] = inv_mod(prime(a) % prime(b), prime(b));
        }
    }
}

u64 RingContext::prime(std::size_t idx) const {
    if (idx < chain_size()) return params_.modulus_chain[idx];
    if (idx == chain_size() && has_special()) return params_.special_prime;
    throw std::out_of_range("RingContext: prime index");
}

RnsPoly poly_zero(const RingContext& ctx, int level, bool with_special, bool ntt_form) {
    RnsPoly p;
    p.level = level;
    p.with_special = with_special;
    p.ntt_form = ntt_form;
    p.data.assign((static_cast<std::size_t>(level) + 1 + (with_special ? 1 : 0)) * ctx.n(), 0);
    return p;
}

RnsPoly sample_uniform(const RingContext& ctx, int level, bool with_special, Rng& rng) {
    RnsPoly p = poly_zero(ctx, level, with_special, true);
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < p.component_count(); ++c) {
        const u64 q = ctx.prime(p.prime_index(c, ctx));
        auto comp = p.comp(c, n);
        for (auto& x : comp) x = rng() % q;
    }
    return p;
}

namespace {

RnsPoly from_small_coeffs(const RingContext& ctx, std::span<const int> coeffs, int level,
                          bool with_special) {
    RnsPoly p = poly_zero(ctx, level, with_special, false);
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < p.component_count(); ++c) {
        const u64 q = ctx.prime(p.prime_index(c, ctx));
        auto comp = p.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const int v = coeffs[i];
            comp[i] = v >= 0 ? static_cast<u64>(v) : q - static_cast<u64>(-v);
        }
    }
    poly_ntt(ctx, p);
    return p;
}

}  // namespace

RnsPoly sample_ternary(const RingContext& ctx, int level, bool with_special, Rng& rng) {
    std::vector<int> c(ctx.n());
    for (auto& x : c) x = static_cast<int>(rng() % 3) - 1;
    return from_small_coeffs(ctx, c, level, with_special);
}

RnsPoly sample_gaussian(const RingContext& ctx, int level, bool with_special, Rng& rng) {
    const double sigma = ctx.params().gaussian_stddev;
    std::vector<int> c(ctx.n());
    // Box-Muller on explicit uniforms keeps key material reproducible across
    // standard-library implementations.
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < c.size(); i += 2) {
        double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        double r = std::sqrt(-2.0 * std::log(u1)) * sigma;
        c[i] = static_cast<int>(std::lround(r * std::cos(kTwoPi * u2)));
        if (i + 1 < c.size()) c[i + 1] = static_cast<int>(std::lround(r * std::sin(kTwoPi * u2)));
    }
    return from_small_coeffs(ctx, c, level, with_special);
}

RnsPoly poly_from_signed(const RingContext& ctx, std::span<const std::int64_t> coeffs, int level,
                         bool with_special, bool to_ntt) {
    if (coeffs.size() != ctx.n()) throw std::invalid_argument("poly_from_signed: coefficient count");
    RnsPoly p = poly_zero(ctx, level, with_special, false);
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < p.component_count(); ++c) {
        const u64 q = ctx.prime(p.prime_index(c, ctx));
        auto comp = p.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::int64_t v = coeffs[i];
            comp[i] = v >= 0 ? static_cast<u64>(v) % q : q - (static_cast<u64>(-v) % q);
        }
    }
    if (to_ntt) poly_ntt(ctx, p);
    return p;
}

std::vector<double> poly_to_signed(const RingContext& ctx, const RnsPoly& p) {
    if (p.with_special) throw std::invalid_argument("poly_to_signed: special component present");
    RnsPoly c = p;
    if (c.ntt_form) poly_intt(ctx, c);
    const std::uint32_t n = ctx.n();
    const std::size_t k = c.component_count();

    std::vector<u64> digits(k);
    std::vector<u64> half_digits(k);
    // Mixed-radix digits of (Q_l - 1) / 2, whose residues are (q_j - 1) / 2.
    {
        for (std::size_t i = 0; i < k; ++i) {
            u64 v = (ctx.prime(i) - 1) / 2;
            for (std::size_t j = 0; j < i; ++j) {
                v = sub_mod(v, half_digits[j] % ctx.prime(i), ctx.prime(i));
                v = mul_mod(v, ctx.prime_inv(j, i), ctx.prime(i));
            }
            half_digits[i] = v;
        }
    }

    std::vector<double> out(n);
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        for (std::size_t i = 0; i < k; ++i) {
            u64 v = c.comp(i, n)[idx];
            const u64 qi = ctx.prime(i);
            for (std::size_t j = 0; j < i; ++j) {
                v = sub_mod(v, digits[j] % qi, qi);
                v = mul_mod(v, ctx.prime_inv(j, i), qi);
            }
            digits[i] = v;
        }
        // sign: value negative iff digits > digits of (Q-1)/2, compared MSB first
        bool negative = false;
        for (std::size_t i = k; i-- > 0;) {
            if (digits[i] != half_digits[i]) {
                negative = digits[i] > half_digits[i];
                break;
            }
        }
        if (negative) {
            // |v| = Q - v = ((Q-1) - v) + 1, digitwise with carry for the +1
            for (std::size_t i = 0; i < k; ++i) digits[i] = ctx.prime(i) - 1 - digits[i];
            for (std::size_t i = 0; i < k; ++i) {
                if (++digits[i] < ctx.prime(i)) break;
                digits[i] = 0;
            }
        }
        double val = 0.0;
        for (std::size_t i = k; i-- > 0;) val = val * static_cast<double>(ctx.prime(i)) + static_cast<double>(digits[i]);
        out[idx] = negative ? -val : val;
    }
    return out;
}

namespace {

void check_layout(const RnsPoly& a, const RnsPoly& b) {
    if (a.level != b.level || a.with_special != b.with_special || a.ntt_form != b.ntt_form)
        throw std::invalid_argument("RnsPoly: layout mismatch");
}

}  // namespace

void poly_add_inplace(const RingContext& ctx, RnsPoly& a, const RnsPoly& b) {
    check_layout(a, b);
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c) {
        const u64 q = ctx.prime(a.prime_index(c, ctx));
        auto ac = a.comp(c, n);
        auto bc = b.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) ac[i] = add_mod(ac[i], bc[i], q);
    }
}

void poly_sub_inplace(const RingContext& ctx, RnsPoly& a, const RnsPoly& b) {
    check_layout(a, b);
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c) {
        const u64 q = ctx.prime(a.prime_index(c, ctx));
        auto ac = a.comp(c, n);
        auto bc = b.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) ac[i] = sub_mod(ac[i], bc[i], q);
    }
}

void poly_neg_inplace(const RingContext& ctx, RnsPoly& a) {
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c) {
        const u64 q = ctx.prime(a.prime_index(c, ctx));
        for (auto& x : a.comp(c, n)) x = x == 0 ? 0 : q - x;
    }
}

RnsPoly poly_mul(const RingContext& ctx, const RnsPoly& a, const RnsPoly& b) {
    check_layout(a, b);
    if (!a.ntt_form) throw std::invalid_argument("poly_mul: operands must be in NTT form");
    RnsPoly out = a;
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < out.component_count(); ++c) {
        const u64 q = ctx.prime(out.prime_index(c, ctx));
        auto oc = out.comp(c, n);
        auto bc = b.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) oc[i] = mul_mod(oc[i], bc[i], q);
    }
    return out;
}

void poly_mul_scalar_inplace(const RingContext& ctx, RnsPoly& a, std::int64_t scalar) {
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c) {
        const u64 q = ctx.prime(a.prime_index(c, ctx));
        const u64 s = scalar >= 0 ? static_cast<u64>(scalar) % q : q - (static_cast<u64>(-scalar) % q);
        for (auto& x : a.comp(c, n)) x = mul_mod(x, s, q);
    }
}

void poly_ntt(const RingContext& ctx, RnsPoly& a) {
    if (a.ntt_form) throw std::invalid_argument("poly_ntt: already NTT form");
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c)
        ctx.tables(a.prime_index(c, ctx)).forward(a.comp(c, n));
    a.ntt_form = true;
}

void poly_intt(const RingContext& ctx, RnsPoly& a) {
    if (!a.ntt_form) throw std::invalid_argument("poly_intt: already coefficient form");
    const std::uint32_t n = ctx.n();
    for (std::size_t c = 0; c < a.component_count(); ++c)
        ctx.tables(a.prime_index(c, ctx)).inverse(a.comp(c, n));
    a.ntt_form = false;
}

RnsPoly poly_automorphism(const RingContext& ctx, const RnsPoly& a, std::uint64_t t) {
    if (a.ntt_form) throw std::invalid_argument("poly_automorphism: coefficient form required");
    const std::uint32_t n = ctx.n();
    const std::uint64_t two_n = 2ULL * n;
    if (t % 2 == 0) throw std::invalid_argument("poly_automorphism: exponent must be odd");
    RnsPoly out = poly_zero(ctx, a.level, a.with_special, false);
    for (std::size_t c = 0; c < a.component_count(); ++c) {
        const u64 q = ctx.prime(a.prime_index(c, ctx));
        auto ac = a.comp(c, n);
        auto oc = out.comp(c, n);
        for (std::uint32_t k = 0; k < n; ++k) {
            const std::uint64_t e = (static_cast<std::uint64_t>(k) * t) % two_n;
            const u64 v = ac[k];
            if (e < n) {
                oc[e] = v;
            } else {
                oc[e - n] = v == 0 ? 0 : q - v;
            }
        }
    }
    return out;
}

namespace {

// Shared core of rescale / mod-down: remove component `drop` (its prime
// q_d), subtracting the centered lift and multiplying by q_d^{-1}.
RnsPoly divide_out_component(const RingContext& ctx, const RnsPoly& a, std::size_t drop_comp,
                             int out_level, bool out_special) {
    const std::uint32_t n = ctx.n();
    const std::size_t drop_prime = a.prime_index(drop_comp, ctx);
    const u64 qd = ctx.prime(drop_prime);

    // centered lift of the dropped component, coefficient domain
    std::vector<u64> last(a.comp(drop_comp, n).begin(), a.comp(drop_comp, n).end());
    ctx.tables(drop_prime).inverse(last);
    std::vector<std::int64_t> centered(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        centered[i] = last[i] > qd / 2 ? static_cast<std::int64_t>(last[i]) - static_cast<std::int64_t>(qd)
                                       : static_cast<std::int64_t>(last[i]);
    }

    RnsPoly out = poly_zero(ctx, out_level, out_special, true);
    std::vector<u64> lifted(n);
    for (std::size_t c = 0; c < out.component_count(); ++c) {
        const std::size_t pi = out.prime_index(c, ctx);
        const u64 q = ctx.prime(pi);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::int64_t v = centered[i];
            lifted[i] = v >= 0 ? static_cast<u64>(v) % q : q - (static_cast<u64>(-v) % q);
        }
        ctx.tables(pi).forward(lifted);
        const u64 inv = ctx.prime_inv(drop_prime, pi);
        auto ac = a.comp(c, n);
        auto oc = out.comp(c, n);
        for (std::uint32_t i = 0; i < n; ++i) oc[i] = mul_mod(sub_mod(ac[i], lifted[i], q), inv, q);
    }
    return out;
}

}  // namespace

RnsPoly poly_rescale(const RingContext& ctx, const RnsPoly& a) {
    if (!a.ntt_form || a.with_special) throw std::invalid_argument("poly_rescale: NTT form without special required");
    if (a.level < 1) throw std::invalid_argument("poly_rescale: level exhausted");
    return divide_out_component(ctx, a, static_cast<std::size_t>(a.level), a.level - 1, false);
}

RnsPoly poly_mod_drop(const RingContext& ctx, const RnsPoly& a) {
    if (a.with_special) throw std::invalid_argument("poly_mod_drop: special component present");
    if (a.level < 1) throw std::invalid_argument("poly_mod_drop: level exhausted");
    RnsPoly out = a;
    out.level = a.level - 1;
    out.data.resize(out.component_count() * ctx.n());
    return out;
}

RnsPoly poly_mod_down_special(const RingContext& ctx, const RnsPoly& a) {
    if (!a.ntt_form || !a.with_special) throw std::invalid_argument("poly_mod_down_special: special component required");
    return divide_out_component(ctx, a, a.component_count() - 1, a.level, false);
}

}  // namespace beaa::he
