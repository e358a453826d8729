// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "beaa/he/params.hpp"

namespace beaa::henn {

enum class OpKind : std::uint8_t {
    cmult_scalar,      // dst = a * encode_scalar(scalar, scale_arg)
    add,               // dst = a + b
    add_plain_scalar,  // dst = a + encode_scalar(scalar, scale_arg)
    mult,              // dst = a * b (relinearized)
    rescale,           // dst = rescale(a)
    mod_drop,          // dst = mod_drop(a)
    relabel,           // dst = with_scale(a, scalar)
};

struct Instr {
    OpKind kind;
    int dst = -1;
    int a = -1, b = -1;
    double scalar = 0.0;
    double scale_arg = 0.0;
    int expect_level = 0;
    double expect_scale = 0.0;
};

struct OpCounts {
    std::uint64_t add = 0, add_plain = 0, cmult = 0, mult = 0, rescale = 0, mod_drop = 0, rot = 0;
    std::uint64_t total() const { return add + add_plain + cmult + mult + rescale + mod_drop + rot; }
};

/// Straight-line homomorphic program over a register file of ciphertext
/// cells. Blocks inside one layer touch disjoint destination registers and
/// may run in parallel; layer boundaries are barriers.
struct HePlan {
    int n_regs = 0;
    std::vector<int> input_regs;   // input grid, (c, y, x) row-major
    std::vector<int> output_regs;  // one cell per class
    double input_scale = 0.0;
    int input_level = 0;

    struct Block {
        std::vector<Instr> instrs;
    };
    std::vector<Block> blocks;
    std::vector<std::size_t> layer_end;      // block count after each layer (barrier prefix)
    std::vector<std::string> layer_names;    // aligned with layer_end
    std::vector<int> free_after_layer;       // per register, layer index after which it is dead

    int depth = 0;  // levels consumed input -> output
    OpCounts counts;
    std::uint64_t params_fp = 0;
    int in_channels = 0, in_height = 0, in_width = 0;
    int num_classes = 0;
};

/// Thrown when a network needs more levels than the modulus chain offers.
struct CompileDepthError : std::runtime_error {
    int layer_index;
    std::string layer_name;
    CompileDepthError(int idx, std::string name, int have, int need)
        : std::runtime_error("depth exceeds modulus chain at layer " + std::to_string(idx) + " (" +
                             name + "): need " + std::to_string(need) + " more level(s), have " +
                             std::to_string(have)),
          layer_index(idx),
          layer_name(std::move(name)) {}
};

}  // namespace beaa::henn
