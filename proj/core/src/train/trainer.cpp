// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "beaa/train/backprop.hpp"

namespace beaa::train {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be positive");
    if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("TrainConfig: momentum in [0,1)");
    if (reg_lambda < 0.0) throw std::invalid_argument("TrainConfig: reg_lambda must be >= 0");
    if (temperature < 1.0) throw std::invalid_argument("TrainConfig: temperature must be >= 1");
    if (distill_alpha < 0.0 || distill_alpha > 1.0)
        throw std::invalid_argument("TrainConfig: distill_alpha in [0,1]");
    if (epochs < 0 || batch_size < 1) throw std::invalid_argument("TrainConfig: epochs/batch_size");
}

namespace {

using nn::Tensor;

void flip_horizontal(Tensor& t, int m) {
    for (int c = 0; c < t.channels; ++c)
        for (int y = 0; y < t.height; ++y)
            for (int x = 0; x < t.width / 2; ++x)
                std::swap(t.at(m, c, y, x), t.at(m, c, y, t.width - 1 - x));
}

void update_running_stats(const nn::NetworkSpec& spec, nn::ModelWeights& w,
                          const nn::ForwardCache& cache) {
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto* bn = std::get_if<nn::BatchNorm>(&spec.layers[i]);
        if (!bn) continue;
        const auto* bc = std::get_if<nn::BnCache>(&cache.aux[i]);
        if (!bc) continue;
        auto& p = std::get<nn::BnParams>(w.layers[i]);
        for (std::size_t c = 0; c < p.running_mean.size(); ++c) {
            p.running_mean[c] = bn->momentum * p.running_mean[c] + (1.0 - bn->momentum) * bc->mean[c];
            p.running_var[c] = bn->momentum * p.running_var[c] + (1.0 - bn->momentum) * bc->var[c];
        }
    }
}

TrainResult train_impl(const nn::NetworkSpec& spec, const data::Dataset& ds, const TrainConfig& cfg,
                       std::optional<TeacherRef> teacher) {
    cfg.validate();
    ds.validate();
    if (teacher && (!teacher->spec || !teacher->weights))
        throw std::invalid_argument("train: teacher reference incomplete");

    Rng init_rng(derive_seed(cfg.seed, 0x1417));
    nn::ModelWeights weights = nn::init_weights(spec, init_rng, cfg.act_coeff_noise);
    nn::ModelWeights velocity = zero_like(weights);

    TrainResult result;
    const auto train_idx_all = ds.indices_of(data::Split::train);
    if (train_idx_all.empty()) throw std::invalid_argument("train: no training split");

    double lr = cfg.learning_rate;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng epoch_rng(derive_seed(cfg.seed, 0xe60c + static_cast<std::uint64_t>(epoch)));
        auto order = train_idx_all;
        std::shuffle(order.begin(), order.end(), epoch_rng);

        double sum_hard = 0.0, sum_distill = 0.0, sum_total = 0.0, sum_acc = 0.0;
        std::size_t seen = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::vector<std::size_t> idx(order.begin() + start, order.begin() + stop);
            Tensor batch = ds.gather(idx);
            if (cfg.augment_flip)
                for (int m = 0; m < batch.batch; ++m)
                    if (epoch_rng() & 1) flip_horizontal(batch, m);
            std::vector<int> labels(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = ds.labels[idx[i]];

            // look-ahead shift: c += mu * V
            auto wviews = param_views(weights);
            auto vviews = param_views(velocity);
            for (std::size_t a = 0; a < wviews.size(); ++a) {
                auto& wv = *wviews[a].data;
                const auto& vv = *vviews[a].data;
                for (std::size_t i = 0; i < wv.size(); ++i) wv[i] += cfg.momentum * vv[i];
            }

            nn::ForwardCache cache;
            Tensor logits = forward_plain(spec, weights, batch, &cache, /*training=*/true);
            for (double v : logits.v)
                if (!std::isfinite(v))
                    throw std::runtime_error("training diverged: non-finite logits at epoch " +
                                             std::to_string(epoch));

            std::vector<double> teacher_logits;
            if (teacher) {
                Tensor tl = forward_plain(*teacher->spec, *teacher->weights, batch, nullptr, false);
                teacher_logits = tl.v;
            }

            std::vector<double> dlogits;
            LossReport rep = kd_loss(logits.v, teacher_logits, labels, spec.num_classes,
                                     cfg.temperature, teacher ? cfg.distill_alpha : 0.0, &dlogits);
            if (!std::isfinite(rep.total_loss))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch));

            nn::ModelWeights grads = zero_like(weights);
            Tensor dl = logits;
            dl.v = dlogits;
            backward_plain(spec, weights, cache, dl, grads);

            // L2 penalty gradients, evaluated at the look-ahead point
            auto gviews = param_views(grads);
            for (std::size_t a = 0; a < gviews.size(); ++a) {
                const bool reg = gviews[a].cls == ParamClass::act_coeff ||
                                 (cfg.l2_on_conv && gviews[a].cls == ParamClass::conv_weight);
                if (reg) regularized_grad(*gviews[a].data, *wviews[a].data, cfg.reg_lambda);
            }

            // V <- mu*V - lr*g ; c <- lookahead - lr*g
            for (std::size_t a = 0; a < wviews.size(); ++a) {
                auto& wv = *wviews[a].data;
                auto& vv = *vviews[a].data;
                const auto& gv = *gviews[a].data;
                for (std::size_t i = 0; i < wv.size(); ++i) {
                    vv[i] = cfg.momentum * vv[i] - lr * gv[i];
                    wv[i] -= lr * gv[i];
                }
            }
            update_running_stats(spec, weights, cache);

            const double bsz = static_cast<double>(idx.size());
            sum_hard += rep.hard_label_loss * bsz;
            sum_distill += rep.distill_loss * bsz;
            sum_total += rep.total_loss * bsz;
            sum_acc += rep.accuracy * bsz;
            seen += idx.size();
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.hard_loss = sum_hard / static_cast<double>(seen);
        em.distill_loss = sum_distill / static_cast<double>(seen);
        em.total_loss = sum_total / static_cast<double>(seen);
        em.train_acc = sum_acc / static_cast<double>(seen);
        em.val_acc = evaluate_accuracy(spec, weights, ds, data::Split::val);
        em.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.metrics.push_back(em);
        lr *= cfg.lr_decay;
    }

    result.weights = std::move(weights);
    return result;
}

}  // namespace

TrainResult train_teacher(const nn::NetworkSpec& spec, const data::Dataset& ds, const TrainConfig& cfg) {
    for (const auto& layer : spec.layers)
        if (const auto* a = std::get_if<nn::Activation>(&layer))
            if (a->kind != nn::ActKind::relu)
                throw std::invalid_argument("train_teacher: expects a ReLU-activated spec");
    return train_impl(spec, ds, cfg, std::nullopt);
}

TrainResult train_student(const nn::NetworkSpec& spec, const data::Dataset& ds, const TrainConfig& cfg,
                          std::optional<TeacherRef> teacher) {
    for (const auto& layer : spec.layers)
        if (const auto* a = std::get_if<nn::Activation>(&layer))
            if (a->kind != nn::ActKind::poly)
                throw std::invalid_argument("train_student: expects a polynomial-activated spec");
    return train_impl(spec, ds, cfg, teacher);
}

double evaluate_accuracy(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                         const data::Dataset& ds, data::Split split, int batch_size) {
    const auto idx = ds.indices_of(split);
    if (idx.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < idx.size(); start += batch_size) {
        const std::size_t stop = std::min(idx.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<std::size_t> part(idx.begin() + start, idx.begin() + stop);
        Tensor logits = forward_plain(spec, weights, ds.gather(part), nullptr, false);
        for (std::size_t m = 0; m < part.size(); ++m) {
            int arg = 0;
            for (int c = 1; c < spec.num_classes; ++c)
                if (logits.at(static_cast<int>(m), c, 0, 0) > logits.at(static_cast<int>(m), arg, 0, 0))
                    arg = c;
            if (arg == ds.labels[part[m]]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(idx.size());
}

std::string metrics_csv_header() {
    return "epoch,hard_loss,distill_loss,total_loss,train_acc,val_acc,wall_s";
}

std::string metrics_csv_row(const EpochMetrics& m) {
    std::ostringstream os;
    os.precision(17);
    os << m.epoch << ',' << m.hard_loss << ',' << m.distill_loss << ',' << m.total_loss << ','
       << m.train_acc << ',' << m.val_acc << ',' << m.wall_s;
    return os.str();
}

}  // namespace beaa::train
