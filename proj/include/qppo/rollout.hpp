// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qppo/agent.hpp"
#include "qppo/env.hpp"

namespace qppo::ppo {

/**
 * One iteration's worth of experience. All per-step arrays have the same
 * length; `bootstrap_value` holds V of the observation following the final
 * step, and `truncation_bootstrap[t]` holds V of the final observation when
 * step t ended an episode by truncation (0 elsewhere) so the time-limit cut
 * keeps its value bootstrap.
 */
struct RolloutBatch {
    int obs_dim = 0;
    int act_dim = 0;
    std::vector<double> states;  // T x obs_dim
    std::vector<double> actions; // T x act_dim (raw samples, before env clipping)
    std::vector<double> rewards;
    std::vector<std::uint8_t> dones; // episode boundary after step t
    std::vector<double> log_probs;
    std::vector<double> values;
    std::vector<double> truncation_bootstrap;
    double bootstrap_value = 0.0;

    // filled by compute_gae
    std::vector<double> advantages;
    std::vector<double> returns;

    std::vector<double> episode_returns; // episodes completed during collection

    std::size_t size() const { return rewards.size(); }
    std::span<const double> state(std::size_t t) const {
        return {states.data() + t * static_cast<std::size_t>(obs_dim),
                static_cast<std::size_t>(obs_dim)};
    }
    std::span<const double> action(std::size_t t) const {
        return {actions.data() + t * static_cast<std::size_t>(act_dim),
                static_cast<std::size_t>(act_dim)};
    }
};

/// Keeps the in-progress episode alive across iterations of one training run.
class RolloutContext {
  public:
    explicit RolloutContext(envs::Environment &env) : env_(&env) {}

    envs::Environment &env() { return *env_; }
    bool started() const { return started_; }

    std::vector<double> current_obs;
    double episode_return = 0.0;
    bool started_ = false;

  private:
    envs::Environment *env_;
};

/**
 * Sequential interaction for n_steps: actions are sampled from the Gaussian
 * policy, clipped to the action bounds before stepping (the raw sample keeps
 * the log-prob), and episodes auto-reset on termination or truncation.
 */
RolloutBatch collect_rollout(ActorCritic &agent, RolloutContext &ctx, int n_steps,
                             std::mt19937_64 &rng);

/**
 * Recursive generalized advantage estimation:
 *   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
 *   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
 *   R_t     = A_t + V_t
 * `values` must carry the bootstrap entry for the state after the last step
 * (length T + 1).
 */
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns);

/// Batch-level wrapper; folds the recorded truncation bootstraps into the
/// reward stream (r_t + gamma * V(final obs)) before running the recursion.
void compute_gae(RolloutBatch &batch, double gamma, double lambda);

} // namespace qppo::ppo
