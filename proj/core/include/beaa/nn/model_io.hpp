// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "beaa/nn/network.hpp"

namespace beaa::nn {

/// A spec plus its weights and the dataset normalization constants it was
/// trained with. Serialized as a topology JSON section followed by raw
/// little-endian float32 blobs (see docs/FORMATS.md).
struct ModelBundle {
    NetworkSpec spec;
    ModelWeights weights;
    std::vector<double> norm_mean, norm_std;  // per input channel; may be empty
};

void save_model(std::ostream& os, const ModelBundle& m);
ModelBundle load_model(std::istream& is);

void save_model_file(const std::filesystem::path& p, const ModelBundle& m);
ModelBundle load_model_file(const std::filesystem::path& p);

}  // namespace beaa::nn
