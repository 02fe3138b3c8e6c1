// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <span>
#include <vector>

namespace qppo::qpolicy {

/// Factorized Gaussian over the action vector. sigma is strictly positive by
/// construction (exponential postprocessing / exp of a log parameter).
struct GaussianPolicy {
    std::vector<double> mu;
    std::vector<double> sigma;

    std::size_t n_actions() const { return mu.size(); }
};

/// Log density of `action` under the diagonal Gaussian.
double log_prob(const GaussianPolicy &policy, std::span<const double> action);

/// mu + sigma * eps with eps standard normal.
std::vector<double> sample(const GaussianPolicy &policy, std::mt19937_64 &rng);

/// Differential entropy: sum_i (log(2 pi e)/2 + log sigma_i).
double entropy(const GaussianPolicy &policy);

} // namespace qppo::qpolicy
