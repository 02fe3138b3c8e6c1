// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/wrappers.hpp"

#include <numbers>
#include <unordered_set>

#include "qppo/errors.hpp"

namespace qppo::envs {

NormalizeObservationWrapper::NormalizeObservationWrapper(Environment &inner) : inner_(inner) {
    spec_ = inner.spec();
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (auto &b : spec_.obs_bounds) {
        if (!(b.low < b.high)) {
            throw ConfigError("NormalizeObservationWrapper: inner bounds must satisfy low < high");
        }
        b = {-half_pi, half_pi};
    }
}

std::vector<double> NormalizeObservationWrapper::transform(std::span<const double> raw) const {
    return vqc::normalize_features(raw, inner_.spec().obs_bounds);
}

std::vector<double> NormalizeObservationWrapper::reset(std::optional<std::uint64_t> seed) {
    return transform(inner_.reset(seed));
}

StepResult NormalizeObservationWrapper::step(std::span<const double> action) {
    StepResult result = inner_.step(action);
    result.observation = transform(result.observation);
    return result;
}

FeatureSelectWrapper::FeatureSelectWrapper(Environment &inner, std::vector<int> indices)
    : inner_(inner), indices_(std::move(indices)) {
    const EnvSpec &inner_spec = inner.spec();
    if (indices_.empty()) {
        throw ConfigError("FeatureSelectWrapper: index list must be non-empty");
    }
    std::unordered_set<int> seen;
    for (int idx : indices_) {
        if (idx < 0 || idx >= inner_spec.obs_dim) {
            throw ConfigError("FeatureSelectWrapper: index " + std::to_string(idx) +
                              " out of range");
        }
        if (!seen.insert(idx).second) {
            throw ConfigError("FeatureSelectWrapper: duplicate index " + std::to_string(idx));
        }
    }
    spec_ = inner_spec;
    spec_.obs_dim = static_cast<int>(indices_.size());
    spec_.obs_bounds.clear();
    for (int idx : indices_) {
        spec_.obs_bounds.push_back(inner_spec.obs_bounds[static_cast<std::size_t>(idx)]);
    }
}

std::vector<double> FeatureSelectWrapper::project(std::span<const double> raw) const {
    std::vector<double> out;
    out.reserve(indices_.size());
    for (int idx : indices_) {
        out.push_back(raw[static_cast<std::size_t>(idx)]);
    }
    return out;
}

std::vector<double> FeatureSelectWrapper::reset(std::optional<std::uint64_t> seed) {
    return project(inner_.reset(seed));
}

StepResult FeatureSelectWrapper::step(std::span<const double> action) {
    StepResult result = inner_.step(action);
    result.observation = project(result.observation);
    return result;
}

} // namespace qppo::envs
