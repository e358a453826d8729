// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "beaa/common.hpp"
#include "beaa/he/encoder.hpp"
#include "beaa/he/params.hpp"
#include "beaa/he/ring.hpp"

namespace beaa::he {

// ---------------------------------------------------------------------------
// Key material
// ---------------------------------------------------------------------------

/// Key-switching key: one (b_j, a_j) pair per chain prime, defined over the
/// full chain extended by the special prime.
struct KswKey {
    std::vector<RnsPoly> b;
    std::vector<RnsPoly> a;
    bool operator==(const KswKey&) const = default;
};

struct LatticeSecretKey {
    RnsPoly s;  // NTT form, chain + special
    bool operator==(const LatticeSecretKey&) const = default;
};
struct LatticePublicKey {
    RnsPoly b, a;  // NTT form, chain only
    bool operator==(const LatticePublicKey&) const = default;
};
struct LatticeEvalKey {
    KswKey ksk;  // switches s^2 -> s
    bool operator==(const LatticeEvalKey&) const = default;
};
struct LatticeRotKey {
    std::uint64_t galois = 0;  // X -> X^galois
    KswKey ksk;                // switches phi(s) -> s
    bool operator==(const LatticeRotKey&) const = default;
};

struct SimKey {
    bool operator==(const SimKey&) const = default;
};

struct SecretKey {
    u64 params_fp = 0;
    std::variant<LatticeSecretKey, SimKey> body;
};
struct PublicKey {
    u64 params_fp = 0;
    std::variant<LatticePublicKey, SimKey> body;
};
struct EvalKey {
    u64 params_fp = 0;
    std::variant<LatticeEvalKey, SimKey> body;
};
struct RotationKeys {
    u64 params_fp = 0;
    std::vector<int> steps;  // normalized to [1, slots)
    std::variant<std::map<int, LatticeRotKey>, SimKey> body;
    bool covers(int step_normalized) const;
};

struct KeySet {
    SecretKey secret;
    PublicKey public_key;
    EvalKey eval;
    RotationKeys rotation;
};

// ---------------------------------------------------------------------------
// Data
// ---------------------------------------------------------------------------

struct Plaintext {
    double scale = 0.0;
    std::uint32_t slot_count = 0;
    u64 params_fp = 0;
    // lattice: NTT polynomial over the full chain; sim: raw slot values
    std::variant<RnsPoly, std::vector<double>> body;
};

struct LatticeCt {
    RnsPoly c0, c1;  // NTT form, chain primes [0..level]
};

struct Ciphertext {
    int level = 0;
    double scale = 0.0;
    std::uint32_t slot_count = 0;
    u64 params_fp = 0;
    std::variant<LatticeCt, std::vector<double>> body;
};

// ---------------------------------------------------------------------------
// Backend contract
// ---------------------------------------------------------------------------

/// Leveled CKKS-style operation set. Two implementations share this
/// contract: the lattice backend (real encryption) and the simulation
/// backend (exact slot arithmetic with identical metadata rules), which
/// serves as the correctness oracle.
class HeBackend {
public:
    explicit HeBackend(HeParams params);
    virtual ~HeBackend() = default;

    const HeParams& params() const { return params_; }
    u64 params_fingerprint() const { return fp_; }
    virtual std::string_view name() const = 0;

    virtual KeySet keygen(std::span<const int> rotation_steps, Rng& rng) const = 0;
    virtual Plaintext encode(std::span<const double> values, double scale) const = 0;
    Plaintext encode(std::span<const double> values) const { return encode(values, params_.default_scale); }
    // Same value in every slot; lattice backends avoid the embedding transform.
    virtual Plaintext encode_scalar(double value, double scale) const = 0;
    virtual std::vector<double> decode(const Plaintext& pt) const = 0;
    virtual Ciphertext encrypt(const Plaintext& pt, const PublicKey& pk, Rng& rng) const = 0;
    virtual Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk) const = 0;

    virtual Ciphertext add(const Ciphertext& a, const Ciphertext& b) const = 0;
    virtual Ciphertext add_plain(const Ciphertext& a, const Plaintext& p) const = 0;
    virtual Ciphertext cmult(const Ciphertext& a, const Plaintext& p) const = 0;
    virtual Ciphertext mult(const Ciphertext& a, const Ciphertext& b, const EvalKey& evk) const = 0;
    virtual Ciphertext rescale(const Ciphertext& a) const = 0;
    virtual Ciphertext mod_drop(const Ciphertext& a) const = 0;
    virtual Ciphertext rotate(const Ciphertext& a, int k, const RotationKeys& keys) const = 0;

    // Explicit alignment helper: mod-drops the fresher operand and reconciles
    // scale metadata within Tolerances::scale_match_rel. No silent alignment
    // happens anywhere else.
    std::pair<Ciphertext, Ciphertext> align(Ciphertext a, Ciphertext b) const;
    // Relabels the scale; target must agree within Tolerances::scale_match_rel.
    Ciphertext with_scale(Ciphertext ct, double target) const;

    std::vector<double> decrypt_decode(const Ciphertext& ct, const SecretKey& sk) const {
        return decode(decrypt(ct, sk));
    }

protected:
    void check_fp(u64 fp, std::string_view what) const;
    void check_add_compatible(const Ciphertext& a, const Ciphertext& b) const;
    void check_plain_compatible(const Ciphertext& a, const Plaintext& p, bool need_scale_match) const;
    static bool scales_match(double a, double b);
    // Multiplies the underlying representation by an exact integer and bumps
    // the declared scale accordingly (value preserved). Used by align.
    virtual Ciphertext raise_scale_integer(const Ciphertext& a, std::int64_t c) const = 0;

    HeParams params_;
    u64 fp_;
};

std::unique_ptr<HeBackend> make_lattice_backend(HeParams params);
std::unique_ptr<HeBackend> make_sim_backend(HeParams params);
std::unique_ptr<HeBackend> make_backend(std::string_view kind, HeParams params);

}  // namespace beaa::he
