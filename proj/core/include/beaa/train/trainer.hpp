// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "beaa/data/dataset.hpp"
#include "beaa/nn/model_io.hpp"
#include "beaa/train/losses.hpp"
#include "beaa/train/optimizer.hpp"

namespace beaa::train {

struct TrainConfig {
    double learning_rate = 0.02;   // alpha_lr
    double momentum = 0.9;         // mu
    double reg_lambda = 1e-4;      // L2 on activation coefficients
    double temperature = 4.0;      // T
    double distill_alpha = 0.7;    // alpha, distillation intensity
    int epochs = 10;
    int batch_size = 64;
    std::uint64_t seed = 1;
    bool l2_on_conv = false;       // extend the penalty to conv weights
    bool augment_flip = false;     // horizontal flips on the train split
    double act_coeff_noise = 0.0;  // stddev around the identity init
    double lr_decay = 1.0;         // per-epoch learning-rate multiplier

    void validate() const;
};

struct EpochMetrics {
    int epoch = 0;
    double hard_loss = 0.0;
    double distill_loss = 0.0;
    double total_loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
    double wall_s = 0.0;  // excluded from reproducibility comparisons
};

struct TrainResult {
    nn::ModelWeights weights;
    std::vector<EpochMetrics> metrics;
};

struct TeacherRef {
    const nn::NetworkSpec* spec = nullptr;
    const nn::ModelWeights* weights = nullptr;
};

/// Plain training of the ReLU network.
TrainResult train_teacher(const nn::NetworkSpec& spec, const data::Dataset& ds, const TrainConfig& cfg);

/// Training of the polynomial-activation network; with a teacher the loss is
/// the distillation-weighted sum, without one it is plain cross-entropy.
TrainResult train_student(const nn::NetworkSpec& spec, const data::Dataset& ds, const TrainConfig& cfg,
                          std::optional<TeacherRef> teacher);

/// Accuracy of a model on one dataset split (inference-mode BatchNorm).
double evaluate_accuracy(const nn::NetworkSpec& spec, const nn::ModelWeights& weights,
                         const data::Dataset& ds, data::Split split, int batch_size = 256);

std::string metrics_csv_header();
std::string metrics_csv_row(const EpochMetrics& m);

}  // namespace beaa::train
