// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "beaa/he/backend.hpp"

using namespace beaa;
using namespace beaa::he;

namespace {

struct Fixture {
    std::unique_ptr<HeBackend> backend;
    KeySet keys;
    Ciphertext ct1, ct2;
    Plaintext pt;

    explicit Fixture(const char* kind) {
        backend = make_backend(kind, HeParams::desk());
        Rng rng(17);
        keys = backend->keygen(std::vector<int>{1}, rng);
        std::vector<double> v(backend->params().slot_count(), 0.5);
        pt = backend->encode(v);
        ct1 = backend->encrypt(pt, keys.public_key, rng);
        ct2 = backend->encrypt(pt, keys.public_key, rng);
    }
};

Fixture& lattice() {
    static Fixture f("lattice");
    return f;
}

}  // namespace

static void BM_Add(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->add(f.ct1, f.ct2));
}
BENCHMARK(BM_Add);

static void BM_AddPlain(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->add_plain(f.ct1, f.pt));
}
BENCHMARK(BM_AddPlain);

static void BM_CMultScalar(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            f.backend->cmult(f.ct1, f.backend->encode_scalar(0.5, f.backend->params().default_scale)));
}
BENCHMARK(BM_CMultScalar);

static void BM_Mult(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->mult(f.ct1, f.ct2, f.keys.eval));
}
BENCHMARK(BM_Mult);

static void BM_Rescale(benchmark::State& state) {
    auto& f = lattice();
    auto raised = f.backend->cmult(f.ct1, f.pt);
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->rescale(raised));
}
BENCHMARK(BM_Rescale);

static void BM_Rotate(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->rotate(f.ct1, 1, f.keys.rotation));
}
BENCHMARK(BM_Rotate);

static void BM_EncodeFull(benchmark::State& state) {
    auto& f = lattice();
    std::vector<double> v(f.backend->params().slot_count(), 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(f.backend->encode(v));
}
BENCHMARK(BM_EncodeFull);

static void BM_EncodeScalar(benchmark::State& state) {
    auto& f = lattice();
    for (auto _ : state)
        benchmark::DoNotOptimize(f.backend->encode_scalar(0.25, f.backend->params().default_scale));
}
BENCHMARK(BM_EncodeScalar);

static void BM_EncryptDecrypt(benchmark::State& state) {
    auto& f = lattice();
    Rng rng(5);
    for (auto _ : state) {
        auto ct = f.backend->encrypt(f.pt, f.keys.public_key, rng);
        benchmark::DoNotOptimize(f.backend->decrypt(ct, f.keys.secret));
    }
}
BENCHMARK(BM_EncryptDecrypt);

BENCHMARK_MAIN();
