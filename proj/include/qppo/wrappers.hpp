// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qppo/env.hpp"

namespace qppo::envs {

/**
 * Maps every observation feature into [-pi/2, pi/2] using the inner
 * environment's declared bounds. Rewards, actions and episode structure pass
 * through untouched. Stateless per step.
 */
class NormalizeObservationWrapper final : public Environment {
  public:
    explicit NormalizeObservationWrapper(Environment &inner);

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) override;
    StepResult step(std::span<const double> action) override;

  private:
    std::vector<double> transform(std::span<const double> raw) const;

    Environment &inner_;
    EnvSpec spec_;
};

/// Exposes only the chosen observation features, in the order given.
class FeatureSelectWrapper final : public Environment {
  public:
    FeatureSelectWrapper(Environment &inner, std::vector<int> indices);

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) override;
    StepResult step(std::span<const double> action) override;

    const std::vector<int> &indices() const { return indices_; }

  private:
    std::vector<double> project(std::span<const double> raw) const;

    Environment &inner_;
    std::vector<int> indices_;
    EnvSpec spec_;
};

} // namespace qppo::envs
