// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "beaa/nn/tensor.hpp"

namespace beaa::train {

struct LossReport {
    double hard_label_loss = 0.0;
    double distill_loss = 0.0;
    double total_loss = 0.0;
    double accuracy = 0.0;
};

/// softmax(logits / T) row-wise over (M, C) logits stored as a (M, C, 1, 1)
/// tensor or a raw M*C vector.
std::vector<double> softmax_with_temperature(std::span<const double> logits, int classes, double temperature);

/// Mean cross-entropy of probabilities against integer labels.
double cross_entropy(std::span<const double> probs, int classes, std::span<const int> labels);

/// Knowledge-distillation loss (teacher optional: pass empty span for plain
/// training). total = alpha*T^2*distill + (1-alpha)*hard. The gradient with
/// respect to student logits is written to dlogits when non-null.
LossReport kd_loss(std::span<const double> student_logits, std::span<const double> teacher_logits,
                   std::span<const int> labels, int classes, double temperature, double distill_alpha,
                   std::vector<double>* dlogits = nullptr);

}  // namespace beaa::train
