// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/gaussian.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "qppo/errors.hpp"

namespace qppo::qpolicy {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836; // log(2 pi)
}

double log_prob(const GaussianPolicy &policy, std::span<const double> action) {
    if (action.size() != policy.mu.size() || policy.sigma.size() != policy.mu.size()) {
        throw ConfigError("log_prob: action/policy dimension mismatch");
    }
    double lp = 0.0;
    for (std::size_t i = 0; i < action.size(); ++i) {
        const double sigma = policy.sigma[i];
        assert(sigma > 0.0);
        const double z = (action[i] - policy.mu[i]) / sigma;
        lp += -0.5 * z * z - std::log(sigma) - 0.5 * kLog2Pi;
    }
    return lp;
}

std::vector<double> sample(const GaussianPolicy &policy, std::mt19937_64 &rng) {
    std::normal_distribution<double> standard(0.0, 1.0);
    std::vector<double> action(policy.mu.size());
    for (std::size_t i = 0; i < action.size(); ++i) {
        action[i] = policy.mu[i] + policy.sigma[i] * standard(rng);
    }
    return action;
}

double entropy(const GaussianPolicy &policy) {
    double h = 0.0;
    for (double sigma : policy.sigma) {
        assert(sigma > 0.0);
        h += 0.5 * (kLog2Pi + 1.0) + std::log(sigma);
    }
    return h;
}

} // namespace qppo::qpolicy
