// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/henn/executor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace beaa::henn {

namespace {

void check_meta(const he::Ciphertext& ct, const Instr& in, std::size_t block_idx) {
    if (ct.level != in.expect_level)
        throw std::runtime_error("execute: level drifted from plan at block " +
                                 std::to_string(block_idx) + " (have " + std::to_string(ct.level) +
                                 ", plan " + std::to_string(in.expect_level) + ")");
    if (std::abs(ct.scale / in.expect_scale - 1.0) > he::Tolerances::scale_match_rel)
        throw std::runtime_error("execute: scale drifted from plan at block " +
                                 std::to_string(block_idx));
}

}  // namespace

ExecutionResult execute(const HePlan& plan, const pack::PackedCipherTensor& input,
                        const he::HeBackend& backend, const he::EvalKey& evk) {
    if (input.layout != pack::Layout::element_wise)
        throw std::invalid_argument("execute: element-wise packed input required");
    if (input.channels != plan.in_channels || input.height != plan.in_height ||
        input.width != plan.in_width)
        throw std::invalid_argument("execute: input grid shape does not match plan");
    if (backend.params_fingerprint() != plan.params_fp)
        throw std::invalid_argument("execute: backend parameters do not match plan");

    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::optional<he::Ciphertext>> regs(static_cast<std::size_t>(plan.n_regs));
    for (std::size_t i = 0; i < plan.input_regs.size(); ++i) {
        const auto& ct = input.cells[i];
        if (ct.level != plan.input_level)
            throw std::invalid_argument("execute: input cell at wrong level");
        if (std::abs(ct.scale / plan.input_scale - 1.0) > he::Tolerances::scale_match_rel)
            throw std::invalid_argument("execute: input cell at wrong scale");
        regs[static_cast<std::size_t>(plan.input_regs[i])] = ct;
    }

    auto run_block = [&](std::size_t bi) {
        const auto& instrs = plan.blocks[bi].instrs;
        // temporaries created inside the block die at their last in-block read
        std::vector<int> created;
        auto last_local_read = [&](int reg) {
            std::ptrdiff_t last = -1;
            for (std::size_t i = 0; i < instrs.size(); ++i)
                if (instrs[i].a == reg || instrs[i].b == reg) last = static_cast<std::ptrdiff_t>(i);
            return last;
        };
        for (std::size_t ii = 0; ii < instrs.size(); ++ii) {
            const Instr& in = instrs[ii];
            const he::Ciphertext& a = *regs[static_cast<std::size_t>(in.a)];
            he::Ciphertext out;
            switch (in.kind) {
                case OpKind::cmult_scalar:
                    out = backend.cmult(a, backend.encode_scalar(in.scalar, in.scale_arg));
                    break;
                case OpKind::add:
                    out = backend.add(a, *regs[static_cast<std::size_t>(in.b)]);
                    break;
                case OpKind::add_plain_scalar:
                    out = backend.add_plain(a, backend.encode_scalar(in.scalar, in.scale_arg));
                    break;
                case OpKind::mult:
                    out = backend.mult(a, *regs[static_cast<std::size_t>(in.b)], evk);
                    break;
                case OpKind::rescale:
                    out = backend.rescale(a);
                    break;
                case OpKind::mod_drop:
                    out = backend.mod_drop(a);
                    break;
                case OpKind::relabel:
                    out = backend.with_scale(a, in.scalar);
                    break;
            }
            check_meta(out, in, bi);
            regs[static_cast<std::size_t>(in.dst)] = std::move(out);
            created.push_back(in.dst);
            for (int r : {in.a, in.b}) {
                if (r < 0) continue;
                const bool local = std::find(created.begin(), created.end(), r) != created.end();
                if (local && last_local_read(r) == static_cast<std::ptrdiff_t>(ii))
                    regs[static_cast<std::size_t>(r)].reset();
            }
        }
    };

    std::exception_ptr failure;
    std::size_t begin = 0;
    for (std::size_t layer = 0; layer < plan.layer_end.size(); ++layer) {
        const std::size_t end = plan.layer_end[layer];
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t bi = static_cast<std::ptrdiff_t>(begin);
             bi < static_cast<std::ptrdiff_t>(end); ++bi) {
            try {
                run_block(static_cast<std::size_t>(bi));
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        // release registers whose last reader was this layer
        for (std::size_t r = 0; r < regs.size(); ++r)
            if (plan.free_after_layer[r] == static_cast<int>(layer)) regs[r].reset();
        begin = end;
    }

    ExecutionResult res;
    res.logits.layout = pack::Layout::element_wise;
    res.logits.batch = input.batch;
    res.logits.channels = plan.num_classes;
    res.logits.height = 1;
    res.logits.width = 1;
    res.logits.cells.reserve(plan.output_regs.size());
    for (int r : plan.output_regs) {
        if (!regs[static_cast<std::size_t>(r)])
            throw std::runtime_error("execute: output register freed prematurely");
        res.logits.cells.push_back(*regs[static_cast<std::size_t>(r)]);
    }
    res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace beaa::henn
