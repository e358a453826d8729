// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "beaa/train/backprop.hpp"
#include "beaa/train/trainer.hpp"
#include "test_util.hpp"

using namespace beaa;
using namespace beaa::train;
using testutil::max_abs_diff;

TEST_CASE("softmax with temperature") {
    std::vector<double> logits = {2.0, 0.0};
    // T = 1 equals the standard softmax
    auto p1 = softmax_with_temperature(logits, 2, 1.0);
    const double e2 = std::exp(2.0), e0 = 1.0;
    CHECK(p1[0] == doctest::Approx(e2 / (e2 + e0)));
    CHECK(p1[1] == doctest::Approx(e0 / (e2 + e0)));

    // large T flattens towards uniform
    auto p100 = softmax_with_temperature(logits, 2, 100.0);
    CHECK(std::abs(p100[0] - 0.5) < 1e-2);
    CHECK(std::abs(p100[1] - 0.5) < 1e-2);

    // rows normalize to 1
    Rng rng(3);
    std::uniform_real_distribution<double> d(-5, 5);
    std::vector<double> batch(12);
    for (auto& x : batch) x = d(rng);
    auto pb = softmax_with_temperature(batch, 4, 2.5);
    for (int r = 0; r < 3; ++r) {
        double s = 0;
        for (int c = 0; c < 4; ++c) s += pb[r * 4 + c];
        CHECK(std::abs(s - 1.0) < 1e-12);
    }

    CHECK_THROWS_AS(softmax_with_temperature(std::vector<double>{std::nan("")}, 1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(softmax_with_temperature(logits, 2, 0.0), std::invalid_argument);
}

TEST_CASE("kd_loss: degenerate cases and the distillation weighting") {
    std::vector<int> labels = {0};

    // alpha = 0 -> plain cross-entropy
    std::vector<double> s_logits = {1.0, -1.0};
    auto rep0 = kd_loss(s_logits, s_logits, labels, 2, 4.0, 0.0, nullptr);
    auto probs = softmax_with_temperature(s_logits, 2, 1.0);
    CHECK(rep0.total_loss == rep0.hard_label_loss);
    CHECK(rep0.hard_label_loss == doctest::Approx(-std::log(probs[0])));

    // equal soft targets [0.5, 0.5]: distill loss = ln 2
    std::vector<double> flat = {0.3, 0.3};
    auto repf = kd_loss(flat, flat, labels, 2, 2.0, 0.5, nullptr);
    CHECK(repf.distill_loss == doctest::Approx(std::log(2.0)));

    // alpha = 1, T = 2 -> total = 4 * distill
    auto rep1 = kd_loss(s_logits, flat, labels, 2, 2.0, 1.0, nullptr);
    CHECK(rep1.total_loss == doctest::Approx(4.0 * rep1.distill_loss));

    // weighting identity holds exactly for sampled (alpha, T)
    Rng rng(5);
    std::uniform_real_distribution<double> da(0, 1), dt(1, 8), dl(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> sl(6), tl(6);
        for (auto& x : sl) x = dl(rng);
        for (auto& x : tl) x = dl(rng);
        std::vector<int> ls = {static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
        const double alpha = da(rng), temp = dt(rng);
        auto rep = kd_loss(sl, tl, ls, 3, temp, alpha, nullptr);
        CHECK(rep.total_loss ==
              alpha * temp * temp * rep.distill_loss + (1.0 - alpha) * rep.hard_label_loss);
    }

    // teacher required when alpha > 0
    CHECK_THROWS_AS(kd_loss(s_logits, {}, labels, 2, 2.0, 0.5, nullptr), std::invalid_argument);
    std::vector<double> short_teacher = {0.1};
    CHECK_THROWS_AS(kd_loss(s_logits, short_teacher, labels, 2, 2.0, 0.5, nullptr),
                    std::invalid_argument);
}

TEST_CASE("kd_loss gradient matches finite differences of the weighted total") {
    Rng rng(11);
    std::uniform_real_distribution<double> d(-2, 2);
    std::vector<double> sl(8), tl(8);
    for (auto& x : sl) x = d(rng);
    for (auto& x : tl) x = d(rng);
    std::vector<int> labels = {1, 3};
    const double alpha = 0.6, temp = 3.0;

    std::vector<double> grad;
    kd_loss(sl, tl, labels, 4, temp, alpha, &grad);
    const double h = 1e-6;
    for (std::size_t i = 0; i < sl.size(); ++i) {
        auto sp = sl, sm = sl;
        sp[i] += h;
        sm[i] -= h;
        const double fd = (kd_loss(sp, tl, labels, 4, temp, alpha, nullptr).total_loss -
                           kd_loss(sm, tl, labels, 4, temp, alpha, nullptr).total_loss) /
                          (2 * h);
        CHECK(std::abs(grad[i] - fd) < 1e-6);
    }
}

TEST_CASE("regularized_grad adds lambda * param") {
    std::vector<double> g = {1.0};
    std::vector<double> c = {2.0};
    regularized_grad(g, c, 0.1);
    CHECK(g[0] == doctest::Approx(1.2));

    std::vector<double> g2 = {3.5, -1.0};
    std::vector<double> c2 = {0.7, 2.0};
    auto g2_before = g2;
    regularized_grad(g2, c2, 0.0);
    CHECK(g2 == g2_before);

    // matches finite differences of the penalty 0.5 * lambda * c^2
    const double lambda = 0.37, val = 1.3, h = 1e-6;
    auto penalty = [&](double x) { return 0.5 * lambda * x * x; };
    const double fd = (penalty(val + h) - penalty(val - h)) / (2 * h);
    std::vector<double> g3 = {0.0};
    std::vector<double> c3 = {val};
    regularized_grad(g3, c3, lambda);
    CHECK(std::abs(g3[0] - fd) < 1e-8);
}

TEST_CASE("nesterov_step: SGD reduction, first-step identity, bowl convergence") {
    // mu = 0 reduces to plain SGD
    {
        NesterovState st;
        std::vector<double> c = {3.0};
        nesterov_step(st, c, [](std::span<const double> p, std::span<double> g) { g[0] = p[0]; }, 0.1,
                      0.0);
        CHECK(c[0] == doctest::Approx(3.0 - 0.1 * 3.0));
    }
    // V0 = 0: first impulse is -lr * grad(c0)
    {
        NesterovState st;
        std::vector<double> c = {2.0};
        nesterov_step(st, c, [](std::span<const double> p, std::span<double> g) { g[0] = 2.0 * p[0]; },
                      0.05, 0.9);
        CHECK(st.velocity[0] == doctest::Approx(-0.05 * 4.0));
        CHECK(c[0] == doctest::Approx(2.0 - 0.05 * 4.0));
    }
    // quadratic bowl J = c^2 / 2 converges within 200 steps
    {
        NesterovState st;
        std::vector<double> c = {5.0};
        int steps = 0;
        for (; steps < 200; ++steps) {
            nesterov_step(st, c, [](std::span<const double> p, std::span<double> g) { g[0] = p[0]; },
                          0.1, 0.9);
            if (std::abs(c[0]) < 1e-6) break;
        }
        CHECK(std::abs(c[0]) < 1e-6);
        CHECK(steps < 200);
    }
}

namespace {

data::Dataset blob_dataset(int per_class, int classes, double noise, std::uint64_t seed) {
    data::Dataset ds;
    ds.channels = 1;
    ds.height = 4;
    ds.width = 4;
    ds.class_count = classes;
    Rng rng(seed);
    std::uniform_real_distribution<double> d(-noise, noise);
    for (int i = 0; i < per_class * classes; ++i) {
        const int cls = i % classes;
        const double base = -1.0 + 2.0 * cls / (classes - 1);
        for (int p = 0; p < 16; ++p) ds.images.push_back(base + d(rng));
        ds.labels.push_back(cls);
        ds.splits.push_back(i % 10 == 0 ? data::Split::val : data::Split::train);
    }
    ds.norm_mean = {0.0};
    ds.norm_std = {1.0};
    return ds;
}

nn::NetworkSpec tiny_spec(nn::ActKind kind, nn::Granularity g, int classes = 2) {
    nn::NetworkSpec s;
    s.in_channels = 1;
    s.in_height = 4;
    s.in_width = 4;
    s.num_classes = classes;
    s.layers.push_back(nn::Conv2d{1, 3, 3, 1, 1, true});
    s.layers.push_back(nn::Activation{kind, g});
    s.layers.push_back(nn::BatchNorm{});
    s.layers.push_back(nn::Conv2d{3, classes, 1, 1, 0, true});
    s.layers.push_back(nn::GlobalAvgPool{});
    s.shapes();
    return s;
}

}  // namespace

TEST_CASE("end-to-end gradients match finite differences for every parameter class") {
    auto spec = tiny_spec(nn::ActKind::poly, nn::Granularity::element, 3);
    Rng rng(41);
    auto w = nn::init_weights(spec, rng, 0.05);
    nn::Tensor x = testutil::random_input(rng, 4, spec);
    std::vector<int> labels = {0, 1, 2, 1};

    auto loss_of = [&](const nn::ModelWeights& ww) {
        nn::ForwardCache cache;
        nn::Tensor lg = forward_plain(spec, ww, x, &cache, true);
        return kd_loss(lg.v, {}, labels, 3, 1.0, 0.0, nullptr).total_loss;
    };
    nn::ForwardCache cache;
    nn::Tensor lg = forward_plain(spec, w, x, &cache, true);
    std::vector<double> dl;
    kd_loss(lg.v, {}, labels, 3, 1.0, 0.0, &dl);
    nn::Tensor dlt = lg;
    dlt.v = dl;
    auto grads = zero_like(w);
    backward_plain(spec, w, cache, dlt, grads);

    auto wv = param_views(w);
    auto gv = param_views(grads);
    const double h = 1e-4;
    Rng pick(7);
    int checked = 0;
    for (int probe = 0; probe < 120 && checked < 80; ++probe) {
        const std::size_t a = pick() % wv.size();
        if (wv[a].data->empty()) continue;
        const std::size_t i = pick() % wv[a].data->size();
        double& slot = (*wv[a].data)[i];
        const double save = slot;
        slot = save + h;
        const double lp = loss_of(w);
        slot = save - h;
        const double lm = loss_of(w);
        slot = save;
        const double fd = (lp - lm) / (2 * h);
        const double an = (*gv[a].data)[i];
        if (std::abs(fd) < 1e-3 && std::abs(an) < 1e-3) continue;
        ++checked;
        CHECK(std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8}) < 1e-4);
    }
    CHECK(checked >= 30);
}

TEST_CASE("train_teacher: separable blobs reach 95%, deterministic, zero epochs") {
    auto ds = blob_dataset(60, 2, 0.2, 9);
    auto spec = tiny_spec(nn::ActKind::relu, nn::Granularity::layer);
    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.batch_size = 24;
    cfg.learning_rate = 0.05;
    cfg.seed = 4;

    auto res = train_teacher(spec, ds, cfg);
    CHECK(res.metrics.back().train_acc >= 0.95);
    // per-epoch loss decreases on a learnable set (front to back)
    CHECK(res.metrics.back().total_loss < res.metrics.front().total_loss);

    auto res2 = train_teacher(spec, ds, cfg);
    for (std::size_t e = 0; e < res.metrics.size(); ++e) {
        CHECK(res.metrics[e].total_loss == res2.metrics[e].total_loss);
        CHECK(res.metrics[e].val_acc == res2.metrics[e].val_acc);
    }

    TrainConfig zero = cfg;
    zero.epochs = 0;
    auto res0 = train_teacher(spec, ds, zero);
    Rng ir(derive_seed(zero.seed, 0x1417));
    auto init = nn::init_weights(spec, ir, zero.act_coeff_noise);
    CHECK(res0.metrics.empty());
    CHECK(std::get<nn::ConvParams>(res0.weights.layers[0]).w ==
          std::get<nn::ConvParams>(init.layers[0]).w);

    // poly spec rejected by the teacher trainer, relu by the student trainer
    CHECK_THROWS_AS(train_teacher(tiny_spec(nn::ActKind::poly, nn::Granularity::layer), ds, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        train_student(tiny_spec(nn::ActKind::relu, nn::Granularity::layer), ds, cfg, std::nullopt),
        std::invalid_argument);
}

TEST_CASE("train_student: KD wiring, coefficient movement, alpha=0 equivalence") {
    auto ds = blob_dataset(45, 2, 0.25, 10);
    auto teacher_spec = tiny_spec(nn::ActKind::relu, nn::Granularity::layer);
    TrainConfig tcfg;
    tcfg.epochs = 8;
    tcfg.batch_size = 16;
    tcfg.learning_rate = 0.05;
    tcfg.seed = 5;
    auto teacher = train_teacher(teacher_spec, ds, tcfg);

    auto student_spec = tiny_spec(nn::ActKind::poly, nn::Granularity::channel);
    TrainConfig scfg = tcfg;
    scfg.epochs = 3;
    scfg.distill_alpha = 0.5;
    scfg.temperature = 3.0;

    TeacherRef tref{&teacher_spec, &teacher.weights};
    auto kd = train_student(student_spec, ds, scfg, tref);
    // both loss terms participate for a non-degenerate teacher
    CHECK(kd.metrics.back().distill_loss > 0.0);
    CHECK(kd.metrics.back().hard_loss > 0.0);
    CHECK(kd.metrics.back().total_loss ==
          doctest::Approx(scfg.distill_alpha * scfg.temperature * scfg.temperature *
                              kd.metrics.back().distill_loss +
                          (1 - scfg.distill_alpha) * kd.metrics.back().hard_loss));

    // activation coefficients moved away from the identity start
    Rng ir(derive_seed(scfg.seed, 0x1417));
    auto init = nn::init_weights(student_spec, ir, 0.0);
    const auto& c0 = std::get<nn::ActParams>(init.layers[1]).poly.coeff;
    const auto& c1 = std::get<nn::ActParams>(kd.weights.layers[1]).poly.coeff;
    CHECK(max_abs_diff(c0, c1) > 1e-6);

    // distill_alpha = 0, T = 1: student loss equals plain cross-entropy training, exactly
    TrainConfig plain_cfg = scfg;
    plain_cfg.distill_alpha = 0.0;
    plain_cfg.temperature = 1.0;
    auto with_teacher = train_student(student_spec, ds, plain_cfg, tref);
    auto without_teacher = train_student(student_spec, ds, plain_cfg, std::nullopt);
    for (std::size_t e = 0; e < with_teacher.metrics.size(); ++e)
        CHECK(with_teacher.metrics[e].total_loss == without_teacher.metrics[e].total_loss);
}

TEST_CASE("granularity sweep on a synthetic task: full trend harness end to end") {
    // same harness shape as the CIFAR-10 trend experiment, on a synthetic
    // 3-class texture task so it runs without external data
    data::Dataset ds;
    ds.channels = 1;
    ds.height = 8;
    ds.width = 8;
    ds.class_count = 3;
    Rng rng(77);
    std::uniform_real_distribution<double> noise(-0.6, 0.6);
    for (int i = 0; i < 360; ++i) {
        const int cls = i % 3;
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                // class-dependent spatial frequency plus noise
                const double v = std::sin(0.5 * (cls + 1) * x) * std::cos(0.4 * (cls + 1) * y);
                ds.images.push_back(v + noise(rng));
            }
        ds.labels.push_back(cls);
        ds.splits.push_back(i % 6 == 0 ? data::Split::test : data::Split::train);
    }
    ds.norm_mean = {0.0};
    ds.norm_std = {1.0};

    const nn::SqueezeNetOptConfig slim{8, 4, 8, 4, 8, 16, 8};
    train::TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 30;
    cfg.learning_rate = 0.03;
    cfg.seed = 21;
    cfg.act_coeff_noise = 0.01;

    auto teacher_spec =
        nn::build_squeezenet_opt(3, 1, 8, 8, nn::ActKind::relu, nn::Granularity::layer, slim);
    auto teacher = train_teacher(teacher_spec, ds, cfg);

    std::map<std::string, double> acc;
    for (auto g : {nn::Granularity::layer, nn::Granularity::channel, nn::Granularity::element}) {
        auto spec = nn::build_squeezenet_opt(3, 1, 8, 8, nn::ActKind::poly, g, slim);
        auto res = train_student(spec, ds, cfg, std::nullopt);
        acc[nn::to_string(g)] = evaluate_accuracy(spec, res.weights, ds, data::Split::test);
    }
    {
        auto spec = nn::build_squeezenet_opt(3, 1, 8, 8, nn::ActKind::poly, nn::Granularity::element, slim);
        auto res = train_student(spec, ds, cfg, train::TeacherRef{&teacher_spec, &teacher.weights});
        acc["element+kd"] = evaluate_accuracy(spec, res.weights, ds, data::Split::test);
    }
    MESSAGE("synthetic sweep accuracies: layer=" << acc["layer"] << " channel=" << acc["channel"]
                                                 << " element=" << acc["element"]
                                                 << " element+kd=" << acc["element+kd"]);
    // every variant must beat chance decisively; the fine-grained ordering
    // itself is the subject of the CIFAR-10 acceptance experiment
    for (const auto& [tag, a] : acc) {
        INFO(tag);
        CHECK(a > 0.5);
    }
}

TEST_CASE("training reports divergence as an error") {
    auto ds = blob_dataset(30, 2, 0.2, 12);
    auto spec = tiny_spec(nn::ActKind::poly, nn::Granularity::layer);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batch_size = 16;
    cfg.learning_rate = 1e4;  // guaranteed blow-up
    cfg.seed = 6;
    CHECK_THROWS_AS(train_student(spec, ds, cfg, std::nullopt), std::runtime_error);
}
