// Copyright 2026 the beaa authors
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "beaa/train/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beaa::train {

std::vector<double> softmax_with_temperature(std::span<const double> logits, int classes,
                                             double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("softmax: temperature must be positive");
    if (classes < 1 || logits.size() % static_cast<std::size_t>(classes) != 0)
        throw std::invalid_argument("softmax: logits size not a multiple of classes");
    std::vector<double> out(logits.size());
    const std::size_t rows = logits.size() / classes;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* in = logits.data() + r * classes;
        double* o = out.data() + r * classes;
        double mx = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < classes; ++c) {
            if (!std::isfinite(in[c])) throw std::invalid_argument("softmax: non-finite logit");
            mx = std::max(mx, in[c] / temperature);
        }
        double sum = 0.0;
        for (int c = 0; c < classes; ++c) {
            o[c] = std::exp(in[c] / temperature - mx);
            sum += o[c];
        }
        for (int c = 0; c < classes; ++c) o[c] /= sum;
    }
    return out;
}

double cross_entropy(std::span<const double> probs, int classes, std::span<const int> labels) {
    const std::size_t rows = probs.size() / classes;
    if (labels.size() != rows) throw std::invalid_argument("cross_entropy: label count mismatch");
    double loss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const int y = labels[r];
        if (y < 0 || y >= classes) throw std::invalid_argument("cross_entropy: label out of range");
        loss -= std::log(std::max(probs[r * classes + y], 1e-300));
    }
    return loss / static_cast<double>(rows);
}

LossReport kd_loss(std::span<const double> student_logits, std::span<const double> teacher_logits,
                   std::span<const int> labels, int classes, double temperature, double distill_alpha,
                   std::vector<double>* dlogits) {
    const bool have_teacher = !teacher_logits.empty();
    if (have_teacher && teacher_logits.size() != student_logits.size())
        throw std::invalid_argument("kd_loss: teacher/student shape mismatch");
    if (!have_teacher && distill_alpha != 0.0)
        throw std::invalid_argument("kd_loss: distillation weight without a teacher");
    if (distill_alpha < 0.0 || distill_alpha > 1.0)
        throw std::invalid_argument("kd_loss: distill_alpha outside [0, 1]");

    const std::size_t rows = student_logits.size() / classes;
    const double m = static_cast<double>(rows);

    const std::vector<double> hard_probs = softmax_with_temperature(student_logits, classes, 1.0);
    LossReport rep;
    rep.hard_label_loss = cross_entropy(hard_probs, classes, labels);

    std::size_t correct = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* p = hard_probs.data() + r * classes;
        int arg = 0;
        for (int c = 1; c < classes; ++c)
            if (p[c] > p[arg]) arg = c;
        if (arg == labels[r]) ++correct;
    }
    rep.accuracy = static_cast<double>(correct) / m;

    std::vector<double> soft_student, soft_teacher;
    if (have_teacher) {
        soft_student = softmax_with_temperature(student_logits, classes, temperature);
        soft_teacher = softmax_with_temperature(teacher_logits, classes, temperature);
        double d = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
            for (int c = 0; c < classes; ++c)
                d -= soft_teacher[r * classes + c] *
                     std::log(std::max(soft_student[r * classes + c], 1e-300));
        rep.distill_loss = d / m;
        rep.total_loss = distill_alpha * temperature * temperature * rep.distill_loss +
                         (1.0 - distill_alpha) * rep.hard_label_loss;
    } else {
        rep.distill_loss = 0.0;
        rep.total_loss = rep.hard_label_loss;
    }

    if (dlogits) {
        dlogits->assign(student_logits.size(), 0.0);
        const double hard_w = have_teacher ? (1.0 - distill_alpha) : 1.0;
        for (std::size_t r = 0; r < rows; ++r) {
            for (int c = 0; c < classes; ++c) {
                const std::size_t i = r * classes + c;
                double g = hard_w * (hard_probs[i] - (labels[r] == c ? 1.0 : 0.0));
                if (have_teacher)
                    g += distill_alpha * temperature * (soft_student[i] - soft_teacher[i]);
                (*dlogits)[i] = g / m;
            }
        }
    }
    return rep;
}

}  // namespace beaa::train
