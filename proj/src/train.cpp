// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qppo/errors.hpp"
#include "qppo/gaussian.hpp"

namespace qppo::ppo {

void TrainConfig::validate() const {
    if (batch_size < 1 || minibatch_size < 1 || minibatch_size > batch_size) {
        throw ConfigError("TrainConfig: need 1 <= minibatch_size <= batch_size");
    }
    if (epochs < 1) {
        throw ConfigError("TrainConfig: epochs must be >= 1");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ConfigError("TrainConfig: gamma must be in (0, 1]");
    }
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0)) {
        throw ConfigError("TrainConfig: gae_lambda must be in (0, 1]");
    }
    if (!(clip_eps > 0.0)) {
        throw ConfigError("TrainConfig: clip_eps must be positive");
    }
    if (total_steps < batch_size) {
        throw ConfigError("TrainConfig: total_steps must cover at least one batch");
    }
    if (schedule && schedule->decay <= 0.0) {
        throw ConfigError("TrainConfig: schedule decay must be positive");
    }
}

double lr_multiplier(const TrainConfig &config, std::int64_t completed_env_steps) {
    if (!config.schedule || completed_env_steps < config.schedule->start_step) {
        return 1.0;
    }
    const auto iterations_past =
        (completed_env_steps - config.schedule->start_step) / config.batch_size;
    return std::pow(config.schedule->decay, static_cast<double>(iterations_past));
}

namespace {

struct SampleLoss {
    double actor = 0.0;
    double critic = 0.0;
    double entropy = 0.0;
    bool clipped = false;
};

// Per-sample objective pieces and the loss partials w.r.t. (mu, sigma, V),
// scaled by `inv_count` so accumulation over the minibatch yields means.
SampleLoss sample_loss_and_partials(const qpolicy::GaussianPolicy &policy, double value,
                                    std::span<const double> action, double old_log_prob,
                                    double advantage, double ret, const TrainConfig &config,
                                    double inv_count, std::span<double> d_mu,
                                    std::span<double> d_sigma, double &d_value) {
    const double log_prob_new = qpolicy::log_prob(policy, action);
    const double ratio = std::exp(log_prob_new - old_log_prob);
    const double clipped_ratio = std::clamp(ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps);
    const double unclipped_obj = ratio * advantage;
    const double clipped_obj = clipped_ratio * advantage;
    const bool use_unclipped = unclipped_obj <= clipped_obj;

    SampleLoss loss;
    loss.actor = -std::min(unclipped_obj, clipped_obj) * inv_count;
    loss.clipped = !use_unclipped;

    // d(actor loss)/d(log prob): the clipped branch is flat in the parameters.
    const double d_log_prob = use_unclipped ? -advantage * ratio * inv_count : 0.0;

    const double verr = value - ret;
    loss.critic = verr * verr * inv_count;
    d_value = 2.0 * verr * inv_count;

    loss.entropy = qpolicy::entropy(policy) * inv_count;

    for (std::size_t i = 0; i < policy.mu.size(); ++i) {
        const double sigma = policy.sigma[i];
        const double diff = action[i] - policy.mu[i];
        d_mu[i] = d_log_prob * diff / (sigma * sigma);
        d_sigma[i] = d_log_prob * (diff * diff / (sigma * sigma * sigma) - 1.0 / sigma);
        // entropy bonus enters the loss as -coef * H
        d_sigma[i] -= config.entropy_coef * inv_count / sigma;
    }
    return loss;
}

void normalize(std::span<double> advantages) {
    const double n = static_cast<double>(advantages.size());
    const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
    double var = 0.0;
    for (double a : advantages) {
        var += (a - mean) * (a - mean);
    }
    const double std_dev = std::sqrt(var / n);
    for (double &a : advantages) {
        a = (a - mean) / (std_dev + 1e-8);
    }
}

} // namespace

LossParts evaluate_losses(ActorCritic &agent, const RolloutBatch &batch,
                          const TrainConfig &config) {
    const std::size_t n = batch.size();
    if (batch.advantages.size() != n || batch.returns.size() != n) {
        throw ConfigError("evaluate_losses: advantages not computed");
    }
    const double inv = 1.0 / static_cast<double>(n);
    const auto act_dim = static_cast<std::size_t>(agent.action_dim());
    std::vector<double> d_mu(act_dim);
    std::vector<double> d_sigma(act_dim);
    qpolicy::GaussianPolicy policy;
    double value = 0.0;
    LossParts parts;
    for (std::size_t t = 0; t < n; ++t) {
        agent.evaluate(batch.state(t), policy, value);
        double d_value = 0.0;
        const SampleLoss loss =
            sample_loss_and_partials(policy, value, batch.action(t), batch.log_probs[t],
                                     batch.advantages[t], batch.returns[t], config, inv, d_mu,
                                     d_sigma, d_value);
        parts.actor += loss.actor;
        parts.critic += loss.critic;
        parts.entropy += loss.entropy;
    }
    return parts;
}

void accumulate_loss_gradients(ActorCritic &agent, const RolloutBatch &batch,
                               const TrainConfig &config) {
    const std::size_t n = batch.size();
    if (batch.advantages.size() != n || batch.returns.size() != n) {
        throw ConfigError("accumulate_loss_gradients: advantages not computed");
    }
    const double inv = 1.0 / static_cast<double>(n);
    const auto act_dim = static_cast<std::size_t>(agent.action_dim());
    std::vector<double> d_mu(act_dim);
    std::vector<double> d_sigma(act_dim);
    qpolicy::GaussianPolicy policy;
    double value = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        agent.evaluate(batch.state(t), policy, value);
        double d_value = 0.0;
        sample_loss_and_partials(policy, value, batch.action(t), batch.log_probs[t],
                                 batch.advantages[t], batch.returns[t], config, inv, d_mu,
                                 d_sigma, d_value);
        agent.backprop(d_mu, d_sigma, d_value);
    }
}

void adam_step(ParamGroup &group, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    group.steps += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(group.steps));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(group.steps));
    for (std::size_t i = 0; i < group.value.size(); ++i) {
        const double g = group.grad[i];
        group.moment1[i] = beta1 * group.moment1[i] + (1.0 - beta1) * g;
        group.moment2[i] = beta2 * group.moment2[i] + (1.0 - beta2) * g * g;
        const double m_hat = group.moment1[i] / bc1;
        const double v_hat = group.moment2[i] / bc2;
        group.value[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

void sgd_step(ParamGroup &group, double lr) {
    group.steps += 1;
    for (std::size_t i = 0; i < group.value.size(); ++i) {
        group.value[i] -= lr * group.grad[i];
    }
}

UpdateStats ppo_update(ActorCritic &agent, RolloutBatch &batch, const TrainConfig &config,
                       std::mt19937_64 &rng, double lr_mult) {
    config.validate();
    const std::size_t n = batch.size();
    if (batch.advantages.size() != n) {
        throw ConfigError("ppo_update: run compute_gae first");
    }
    if (config.normalize_advantages) {
        normalize(batch.advantages);
    }

    const auto act_dim = static_cast<std::size_t>(agent.action_dim());
    std::vector<double> d_mu(act_dim);
    std::vector<double> d_sigma(act_dim);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto group_refs = agent.groups();
    qpolicy::GaussianPolicy policy;
    double value = 0.0;

    UpdateStats stats;
    std::size_t minibatches = 0;
    std::size_t clip_hits = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.minibatch_size)) {
            const std::size_t count =
                std::min(static_cast<std::size_t>(config.minibatch_size), n - start);
            const double inv = 1.0 / static_cast<double>(count);

            agent.zero_grads();
            double mb_actor = 0.0;
            double mb_critic = 0.0;
            double mb_entropy = 0.0;
            for (std::size_t k = start; k < start + count; ++k) {
                const std::size_t t = order[k];
                agent.evaluate(batch.state(t), policy, value);
                double d_value = 0.0;
                const SampleLoss loss = sample_loss_and_partials(
                    policy, value, batch.action(t), batch.log_probs[t], batch.advantages[t],
                    batch.returns[t], config, inv, d_mu, d_sigma, d_value);
                mb_actor += loss.actor;
                mb_critic += loss.critic;
                mb_entropy += loss.entropy;
                if (loss.clipped) {
                    ++clip_hits;
                }
                agent.backprop(d_mu, d_sigma, d_value);
            }
            if (!std::isfinite(mb_actor) || !std::isfinite(mb_critic)) {
                throw NumericError("ppo_update: non-finite loss in epoch " +
                                   std::to_string(epoch) + " (actor " + std::to_string(mb_actor) +
                                   ", critic " + std::to_string(mb_critic) + ")");
            }
            for (auto &ref : group_refs) {
                const double lr = config.rate_for(ref.lr_group) * lr_mult;
                if (config.optimizer == OptimizerKind::Adam) {
                    adam_step(*ref.group, lr);
                } else {
                    sgd_step(*ref.group, lr);
                }
            }
            stats.actor_loss += mb_actor;
            stats.critic_loss += mb_critic;
            stats.entropy += mb_entropy;
            ++minibatches;
        }
    }
    const double inv_mb = 1.0 / static_cast<double>(minibatches);
    stats.actor_loss *= inv_mb;
    stats.critic_loss *= inv_mb;
    stats.entropy *= inv_mb;
    stats.clip_fraction =
        static_cast<double>(clip_hits) / static_cast<double>(n * static_cast<std::size_t>(config.epochs));
    return stats;
}

} // namespace qppo::ppo
