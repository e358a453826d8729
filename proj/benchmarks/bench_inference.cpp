// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "beaa/henn/compiler.hpp"
#include "beaa/henn/executor.hpp"

using namespace beaa;

namespace {

nn::NetworkSpec small_net() {
    nn::NetworkSpec s;
    s.in_channels = 1;
    s.in_height = 8;
    s.in_width = 8;
    s.num_classes = 4;
    s.layers.push_back(nn::Conv2d{1, 4, 3, 1, 1, true});
    s.layers.push_back(nn::Activation{nn::ActKind::poly, nn::Granularity::element});
    s.layers.push_back(nn::AvgPool{2, 2});
    s.layers.push_back(nn::Conv2d{4, 4, 1, 1, 0, true});
    s.layers.push_back(nn::GlobalAvgPool{});
    s.shapes();
    return s;
}

}  // namespace

// Executes the same plan at increasing logical batch sizes: the instruction
// stream is batch-independent, so total time should stay flat while the
// amortized share falls as 1/M.
static void BM_ExecuteSmallNet(benchmark::State& state) {
    static auto params = he::HeParams::desk();
    static auto backend = he::make_backend("lattice", params);
    static Rng rng(23);
    static auto keys = backend->keygen({}, rng);
    static auto spec = small_net();
    static auto weights = nn::init_weights(spec, rng, 0.02);
    static auto plan = henn::compile(spec, weights, params);

    const int m = static_cast<int>(state.range(0));
    pack::ImageBatch batch = pack::ImageBatch::zeros(m, 1, 8, 8);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& x : batch.data) x = d(rng);
    auto enc = pack::encrypt_packed(pack::pack_elementwise(batch, params), *backend,
                                    keys.public_key, rng);
    for (auto _ : state) {
        auto res = henn::execute(plan, enc, *backend, keys.eval);
        benchmark::DoNotOptimize(res.logits.cells.front());
    }
    state.counters["amortized_s_per_image"] =
        benchmark::Counter(static_cast<double>(m), benchmark::Counter::kIsIterationInvariantRate |
                                                       benchmark::Counter::kInvert);
}
BENCHMARK(BM_ExecuteSmallNet)->Arg(16)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
