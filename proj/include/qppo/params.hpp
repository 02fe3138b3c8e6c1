// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace qppo {

/// Which of the per-group learning rates from the training config applies to
/// a parameter group.
enum class LrGroup { Variational, InputScaling, OutputScaling };

/**
 * One trainable parameter group: values, reverse-mode gradient accumulator
 * and the per-parameter adaptive-moment state that travels with it.
 */
struct ParamGroup {
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<double> moment1;
    std::vector<double> moment2;
    std::int64_t steps = 0; // optimizer steps taken (bias correction)

    void resize(std::size_t n, double init_value) {
        value.assign(n, init_value);
        grad.assign(n, 0.0);
        moment1.assign(n, 0.0);
        moment2.assign(n, 0.0);
        steps = 0;
    }

    void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

    std::size_t size() const { return value.size(); }
};

} // namespace qppo
