// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "beaa/packing.hpp"

namespace beaa::pack {

/// Writes an encrypted packed tensor as one container file per channel plus
/// an index manifest (manifest.json) naming them. Cell order inside a shard
/// is (y, x) row-major.
void save_cipher_shards(const std::filesystem::path& dir, const PackedCipherTensor& t);
PackedCipherTensor load_cipher_shards(const std::filesystem::path& dir);

}  // namespace beaa::pack
