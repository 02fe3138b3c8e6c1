// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qppo/circuit.hpp"

namespace qppo::envs {

/// Static description of an environment's observation/action interface.
struct EnvSpec {
    int obs_dim = 0;
    int act_dim = 0;
    std::vector<vqc::FeatureBounds> obs_bounds;
    std::vector<vqc::FeatureBounds> act_bounds;
    int max_episode_steps = 0;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool terminated = false; // reached a terminal state
    bool truncated = false;  // cut off by the time limit
};

/**
 * Environment protocol: reset(seed) -> observation, step(action) ->
 * (observation, reward, terminated, truncated). Anything honoring it plugs
 * into the rollout collector. Instances share nothing and are not
 * thread-safe; use one per rollout worker.
 */
class Environment {
  public:
    virtual ~Environment() = default;
    virtual const EnvSpec &spec() const = 0;
    virtual std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) = 0;
    virtual StepResult step(std::span<const double> action) = 0;
};

} // namespace qppo::envs
