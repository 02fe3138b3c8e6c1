// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "qppo/agent.hpp"
#include "qppo/rollout.hpp"

namespace qppo::ppo {

/// Learning-rate decay: multiplier 1 until `start_step` env steps, then one
/// factor of `decay` per training iteration.
struct LrSchedule {
    std::int64_t start_step = 0;
    double decay = 1.0;
};

enum class OptimizerKind { Adam, Sgd };

struct TrainConfig {
    std::int64_t total_steps = 150000;
    int batch_size = 4000;
    int minibatch_size = 64;
    int epochs = 10;
    double gamma = 0.99;
    double gae_lambda = 0.1;
    double clip_eps = 0.2;
    double lr_variational = 0.001;  // theta / phi
    double lr_input_scaling = 0.001; // lambda
    double lr_output_scaling = 0.01; // w
    std::optional<LrSchedule> schedule;
    bool normalize_advantages = true;
    double entropy_coef = 0.0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double theta_init_std = 0.1;
    std::uint64_t seed = 1;

    double rate_for(LrGroup group) const {
        switch (group) {
        case LrGroup::Variational:
            return lr_variational;
        case LrGroup::InputScaling:
            return lr_input_scaling;
        case LrGroup::OutputScaling:
            return lr_output_scaling;
        }
        return 0.0;
    }

    void validate() const;
};

/// Decay multiplier applied to every group rate after `completed_env_steps`.
double lr_multiplier(const TrainConfig &config, std::int64_t completed_env_steps);

struct UpdateStats {
    double actor_loss = 0.0;  // mean over minibatches
    double critic_loss = 0.0; // mean over minibatches
    double entropy = 0.0;
    double clip_fraction = 0.0;
};

/// Batch-mean losses at the agent's current parameters (no update). Assumes
/// advantages/returns are already computed and normalized as intended.
struct LossParts {
    double actor = 0.0;
    double critic = 0.0;
    double entropy = 0.0;
};
LossParts evaluate_losses(ActorCritic &agent, const RolloutBatch &batch,
                          const TrainConfig &config);

/// Accumulates the gradient of the batch-mean loss (clipped surrogate +
/// value regression + entropy bonus) into the agent's parameter groups.
/// No optimizer step is taken.
void accumulate_loss_gradients(ActorCritic &agent, const RolloutBatch &batch,
                               const TrainConfig &config);

/**
 * Clipped-surrogate PPO update: `epochs` passes over shuffled minibatches,
 * actor loss -mean(min(r A, clip(r, 1-eps, 1+eps) A)) and critic loss
 * mean((V - R)^2), with disjoint parameter groups stepped at their own
 * learning rate times `lr_mult`. Advantages are normalized once per batch
 * when the config asks for it. Throws NumericError on a non-finite loss.
 */
UpdateStats ppo_update(ActorCritic &agent, RolloutBatch &batch, const TrainConfig &config,
                       std::mt19937_64 &rng, double lr_mult = 1.0);

/// One adaptive-moment step (beta1 0.9, beta2 0.999, eps 1e-8) over the
/// accumulated gradient. Gradients are left untouched.
void adam_step(ParamGroup &group, double lr);

/// Plain gradient descent step.
void sgd_step(ParamGroup &group, double lr);

} // namespace qppo::ppo
