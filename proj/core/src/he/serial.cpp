// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/he/serial.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace beaa::he {

namespace {

constexpr char kMagic[4] = {'B', 'E', 'A', 'C'};

void put_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
void get_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("container: truncated input");
}

void put_u16(std::ostream& os, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    put_bytes(os, b, 2);
}
std::uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    get_bytes(is, b, 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}
void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(os, b, 4);
}
std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    get_bytes(is, b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}
void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(os, b, 8);
}
std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    get_bytes(is, b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}
double get_f64(std::istream& is) {
    std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

void put_u64_vec(std::ostream& os, const std::vector<u64>& v) {
    put_u64(os, v.size());
    for (u64 x : v) put_u64(os, x);
}
std::vector<u64> get_u64_vec(std::istream& is) {
    std::vector<u64> v(get_u64(is));
    for (auto& x : v) x = get_u64(is);
    return v;
}
void put_f64_vec(std::ostream& os, const std::vector<double>& v) {
    put_u64(os, v.size());
    for (double x : v) put_f64(os, x);
}
std::vector<double> get_f64_vec(std::istream& is) {
    std::vector<double> v(get_u64(is));
    for (auto& x : v) x = get_f64(is);
    return v;
}

void put_poly(std::ostream& os, const RnsPoly& p) {
    put_u32(os, static_cast<std::uint32_t>(p.level));
    put_u16(os, p.with_special ? 1 : 0);
    put_u16(os, p.ntt_form ? 1 : 0);
    put_u64_vec(os, p.data);
}
RnsPoly get_poly(std::istream& is) {
    RnsPoly p;
    p.level = static_cast<int>(get_u32(is));
    p.with_special = get_u16(is) != 0;
    p.ntt_form = get_u16(is) != 0;
    p.data = get_u64_vec(is);
    return p;
}

void put_ksk(std::ostream& os, const KswKey& k) {
    put_u64(os, k.b.size());
    for (const auto& p : k.b) put_poly(os, p);
    for (const auto& p : k.a) put_poly(os, p);
}
KswKey get_ksk(std::istream& is) {
    KswKey k;
    const std::size_t n = get_u64(is);
    k.b.reserve(n);
    k.a.reserve(n);
    for (std::size_t i = 0; i < n; ++i) k.b.push_back(get_poly(is));
    for (std::size_t i = 0; i < n; ++i) k.a.push_back(get_poly(is));
    return k;
}

}  // namespace

void write_container_header(std::ostream& os, ContainerKind kind) {
    put_bytes(os, kMagic, 4);
    put_u16(os, kContainerVersion);
    put_u16(os, static_cast<std::uint16_t>(kind));
}

ContainerKind read_container_header(std::istream& is) {
    char magic[4];
    get_bytes(is, magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("container: bad magic");
    const std::uint16_t version = get_u16(is);
    if (version != kContainerVersion)
        throw std::runtime_error("container: unsupported version " + std::to_string(version));
    return static_cast<ContainerKind>(get_u16(is));
}

namespace {

void expect_kind(std::istream& is, ContainerKind want) {
    const ContainerKind got = read_container_header(is);
    if (got != want) throw std::runtime_error("container: unexpected kind");
}

}  // namespace

void save_params(std::ostream& os, const HeParams& p) {
    write_container_header(os, ContainerKind::he_params);
    put_u32(os, p.ring_degree);
    put_u64_vec(os, p.modulus_chain);
    put_u64(os, p.special_prime);
    put_f64(os, p.default_scale);
    put_u32(os, p.security_lambda);
    put_f64(os, p.gaussian_stddev);
}

HeParams load_params(std::istream& is) {
    expect_kind(is, ContainerKind::he_params);
    HeParams p;
    p.ring_degree = get_u32(is);
    p.modulus_chain = get_u64_vec(is);
    p.special_prime = get_u64(is);
    p.default_scale = get_f64(is);
    p.security_lambda = get_u32(is);
    p.gaussian_stddev = get_f64(is);
    p.validate();
    return p;
}

void save_secret_key(std::ostream& os, const SecretKey& sk) {
    write_container_header(os, ContainerKind::secret_key);
    put_u64(os, sk.params_fp);
    if (std::holds_alternative<LatticeSecretKey>(sk.body)) {
        put_u16(os, 0);
        put_poly(os, std::get<LatticeSecretKey>(sk.body).s);
    } else {
        put_u16(os, 1);
    }
}

SecretKey load_secret_key(std::istream& is) {
    expect_kind(is, ContainerKind::secret_key);
    SecretKey sk;
    sk.params_fp = get_u64(is);
    if (get_u16(is) == 0) {
        sk.body = LatticeSecretKey{get_poly(is)};
    } else {
        sk.body = SimKey{};
    }
    return sk;
}

void save_public_keys(std::ostream& os, const PublicKey& pk, const EvalKey& evk,
                      const RotationKeys& rot) {
    write_container_header(os, ContainerKind::public_keys);
    put_u64(os, pk.params_fp);
    const bool lattice = std::holds_alternative<LatticePublicKey>(pk.body);
    put_u16(os, lattice ? 0 : 1);
    put_u64(os, rot.steps.size());
    for (int s : rot.steps) put_u32(os, static_cast<std::uint32_t>(s));
    if (!lattice) return;
    const auto& p = std::get<LatticePublicKey>(pk.body);
    put_poly(os, p.b);
    put_poly(os, p.a);
    put_ksk(os, std::get<LatticeEvalKey>(evk.body).ksk);
    const auto& table = std::get<std::map<int, LatticeRotKey>>(rot.body);
    put_u64(os, table.size());
    for (const auto& [step, key] : table) {
        put_u32(os, static_cast<std::uint32_t>(step));
        put_u64(os, key.galois);
        put_ksk(os, key.ksk);
    }
}

void load_public_keys(std::istream& is, PublicKey& pk, EvalKey& evk, RotationKeys& rot) {
    expect_kind(is, ContainerKind::public_keys);
    const u64 fp = get_u64(is);
    const bool sim = get_u16(is) != 0;
    std::vector<int> steps(get_u64(is));
    for (auto& s : steps) s = static_cast<int>(get_u32(is));
    pk.params_fp = evk.params_fp = rot.params_fp = fp;
    rot.steps = std::move(steps);
    if (sim) {
        pk.body = SimKey{};
        evk.body = SimKey{};
        rot.body = SimKey{};
        return;
    }
    LatticePublicKey p;
    p.b = get_poly(is);
    p.a = get_poly(is);
    pk.body = std::move(p);
    evk.body = LatticeEvalKey{get_ksk(is)};
    std::map<int, LatticeRotKey> table;
    const std::size_t nrot = get_u64(is);
    for (std::size_t i = 0; i < nrot; ++i) {
        const int step = static_cast<int>(get_u32(is));
        LatticeRotKey rk;
        rk.galois = get_u64(is);
        rk.ksk = get_ksk(is);
        table.emplace(step, std::move(rk));
    }
    rot.body = std::move(table);
}

void write_ciphertext_body(std::ostream& os, const Ciphertext& ct) {
    put_u32(os, static_cast<std::uint32_t>(ct.level));
    put_f64(os, ct.scale);
    put_u32(os, ct.slot_count);
    put_u64(os, ct.params_fp);
    if (std::holds_alternative<LatticeCt>(ct.body)) {
        put_u16(os, 0);
        put_poly(os, std::get<LatticeCt>(ct.body).c0);
        put_poly(os, std::get<LatticeCt>(ct.body).c1);
    } else {
        put_u16(os, 1);
        put_f64_vec(os, std::get<std::vector<double>>(ct.body));
    }
}

Ciphertext read_ciphertext_body(std::istream& is) {
    Ciphertext ct;
    ct.level = static_cast<int>(get_u32(is));
    ct.scale = get_f64(is);
    ct.slot_count = get_u32(is);
    ct.params_fp = get_u64(is);
    if (get_u16(is) == 0) {
        LatticeCt body;
        body.c0 = get_poly(is);
        body.c1 = get_poly(is);
        ct.body = std::move(body);
    } else {
        ct.body = get_f64_vec(is);
    }
    return ct;
}

void save_ciphertext(std::ostream& os, const Ciphertext& ct) {
    write_container_header(os, ContainerKind::ciphertext);
    write_ciphertext_body(os, ct);
}

Ciphertext load_ciphertext(std::istream& is) {
    expect_kind(is, ContainerKind::ciphertext);
    return read_ciphertext_body(is);
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
    return os;
}
std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + p.string());
    return is;
}

}  // namespace

void save_params_file(const std::filesystem::path& p, const HeParams& params) {
    auto os = open_out(p);
    save_params(os, params);
}
HeParams load_params_file(const std::filesystem::path& p) {
    auto is = open_in(p);
    return load_params(is);
}
void save_secret_key_file(const std::filesystem::path& p, const SecretKey& sk) {
    auto os = open_out(p);
    save_secret_key(os, sk);
}
SecretKey load_secret_key_file(const std::filesystem::path& p) {
    auto is = open_in(p);
    return load_secret_key(is);
}
void save_public_keys_file(const std::filesystem::path& p, const PublicKey& pk, const EvalKey& evk,
                           const RotationKeys& rot) {
    auto os = open_out(p);
    save_public_keys(os, pk, evk, rot);
}
void load_public_keys_file(const std::filesystem::path& p, PublicKey& pk, EvalKey& evk,
                           RotationKeys& rot) {
    auto is = open_in(p);
    load_public_keys(is, pk, evk, rot);
}
void save_ciphertext_file(const std::filesystem::path& p, const Ciphertext& ct) {
    auto os = open_out(p);
    save_ciphertext(os, ct);
}
Ciphertext load_ciphertext_file(const std::filesystem::path& p) {
    auto is = open_in(p);
    return load_ciphertext(is);
}

}  // namespace beaa::he
