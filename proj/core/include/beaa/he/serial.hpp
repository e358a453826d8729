// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "beaa/he/backend.hpp"

namespace beaa::he {

/// Self-describing binary containers. Every payload starts with
///   magic "BEAC" | u16 version | u16 kind
/// followed by kind-specific fields; integers little-endian. See
/// docs/FORMATS.md for the byte-level layout.
enum class ContainerKind : std::uint16_t {
    he_params = 1,
    secret_key = 2,
    public_keys = 3,
    ciphertext = 4,
    model = 5,
    cipher_shard = 6,
};

inline constexpr std::uint16_t kContainerVersion = 1;

void write_container_header(std::ostream& os, ContainerKind kind);
ContainerKind read_container_header(std::istream& is);  // throws on bad magic/version

void save_params(std::ostream& os, const HeParams& p);
HeParams load_params(std::istream& is);

void save_secret_key(std::ostream& os, const SecretKey& sk);
SecretKey load_secret_key(std::istream& is);

void save_public_keys(std::ostream& os, const PublicKey& pk, const EvalKey& evk,
                      const RotationKeys& rot);
void load_public_keys(std::istream& is, PublicKey& pk, EvalKey& evk, RotationKeys& rot);

void save_ciphertext(std::ostream& os, const Ciphertext& ct);
Ciphertext load_ciphertext(std::istream& is);

// Bare (headerless) ciphertext records, for embedding in shard files.
void write_ciphertext_body(std::ostream& os, const Ciphertext& ct);
Ciphertext read_ciphertext_body(std::istream& is);

// File conveniences.
void save_params_file(const std::filesystem::path& p, const HeParams& params);
HeParams load_params_file(const std::filesystem::path& p);
void save_secret_key_file(const std::filesystem::path& p, const SecretKey& sk);
SecretKey load_secret_key_file(const std::filesystem::path& p);
void save_public_keys_file(const std::filesystem::path& p, const PublicKey& pk, const EvalKey& evk,
                           const RotationKeys& rot);
void load_public_keys_file(const std::filesystem::path& p, PublicKey& pk, EvalKey& evk,
                           RotationKeys& rot);
void save_ciphertext_file(const std::filesystem::path& p, const Ciphertext& ct);
Ciphertext load_ciphertext_file(const std::filesystem::path& p);

}  // namespace beaa::he
