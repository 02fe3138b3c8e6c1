// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/rollout.hpp"

#include <algorithm>
#include <string>

#include "qppo/errors.hpp"
#include "qppo/gaussian.hpp"

namespace qppo::ppo {

RolloutBatch collect_rollout(ActorCritic &agent, RolloutContext &ctx, int n_steps,
                             std::mt19937_64 &rng) {
    if (n_steps < 1) {
        throw ConfigError("collect_rollout: n_steps must be >= 1");
    }
    envs::Environment &env = ctx.env();
    const envs::EnvSpec &spec = env.spec();
    if (spec.obs_dim != agent.obs_dim() || spec.act_dim != agent.action_dim()) {
        throw ConfigError("collect_rollout: agent/environment dimensions disagree");
    }

    RolloutBatch batch;
    batch.obs_dim = spec.obs_dim;
    batch.act_dim = spec.act_dim;
    const auto steps = static_cast<std::size_t>(n_steps);
    batch.states.reserve(steps * static_cast<std::size_t>(spec.obs_dim));
    batch.actions.reserve(steps * static_cast<std::size_t>(spec.act_dim));
    batch.rewards.reserve(steps);
    batch.dones.reserve(steps);
    batch.log_probs.reserve(steps);
    batch.values.reserve(steps);
    batch.truncation_bootstrap.assign(steps, 0.0);

    if (!ctx.started()) {
        ctx.current_obs = env.reset(rng());
        ctx.episode_return = 0.0;
        ctx.started_ = true;
    }

    qpolicy::GaussianPolicy policy;
    double value = 0.0;
    std::vector<double> clipped(static_cast<std::size_t>(spec.act_dim));

    for (int t = 0; t < n_steps; ++t) {
        agent.evaluate(ctx.current_obs, policy, value);
        const std::vector<double> raw_action = qpolicy::sample(policy, rng);
        for (std::size_t i = 0; i < clipped.size(); ++i) {
            clipped[i] = std::clamp(raw_action[i], spec.act_bounds[i].low, spec.act_bounds[i].high);
        }

        envs::StepResult result;
        try {
            result = env.step(clipped);
        } catch (const std::exception &e) {
            throw NumericError("environment fault at rollout step " + std::to_string(t) + ": " +
                               e.what());
        }

        batch.states.insert(batch.states.end(), ctx.current_obs.begin(), ctx.current_obs.end());
        batch.actions.insert(batch.actions.end(), raw_action.begin(), raw_action.end());
        batch.rewards.push_back(result.reward);
        batch.log_probs.push_back(qpolicy::log_prob(policy, raw_action));
        batch.values.push_back(value);
        ctx.episode_return += result.reward;

        const bool done = result.terminated || result.truncated;
        batch.dones.push_back(done ? 1 : 0);
        if (result.truncated && !result.terminated) {
            // the episode continues value-wise; keep V(final observation)
            batch.truncation_bootstrap[static_cast<std::size_t>(t)] =
                agent.value(result.observation);
        }
        if (done) {
            batch.episode_returns.push_back(ctx.episode_return);
            ctx.episode_return = 0.0;
            ctx.current_obs = env.reset();
        } else {
            ctx.current_obs = std::move(result.observation);
        }
    }
    batch.bootstrap_value = agent.value(ctx.current_obs);
    return batch;
}

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns) {
    const std::size_t n = rewards.size();
    if (values.size() != n + 1 || dones.size() != n || advantages.size() != n ||
        returns.size() != n) {
        throw ConfigError("compute_gae: array length mismatch");
    }
    double gae = 0.0;
    for (std::size_t t = n; t-- > 0;) {
        const double nonterminal = dones[t] ? 0.0 : 1.0;
        const double delta = rewards[t] + gamma * values[t + 1] * nonterminal - values[t];
        gae = delta + gamma * lambda * nonterminal * gae;
        advantages[t] = gae;
        returns[t] = gae + values[t];
    }
}

void compute_gae(RolloutBatch &batch, double gamma, double lambda) {
    const std::size_t n = batch.size();
    std::vector<double> rewards(batch.rewards);
    for (std::size_t t = 0; t < n; ++t) {
        rewards[t] += gamma * batch.truncation_bootstrap[t];
    }
    std::vector<double> values(batch.values);
    values.push_back(batch.bootstrap_value);
    batch.advantages.assign(n, 0.0);
    batch.returns.assign(n, 0.0);
    compute_gae(rewards, values, batch.dones, gamma, lambda, batch.advantages, batch.returns);
}

} // namespace qppo::ppo
