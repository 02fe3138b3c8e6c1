// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/policy.hpp"

#include <cmath>

namespace qppo::qpolicy {

GaussianPolicy actor_forward(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                             const ReadoutConfig &readout, std::span<const double> s) {
    if (static_cast<int>(params.w.size()) != readout.actor_weight_count()) {
        throw ConfigError("actor_forward: weight count does not match readout");
    }
    const qsim::StateVector state = vqc::forward(plan, params, s);
    const int n_actions = readout.n_actions;
    GaussianPolicy policy;
    policy.mu.resize(static_cast<std::size_t>(n_actions));
    policy.sigma.resize(static_cast<std::size_t>(n_actions));
    for (int i = 0; i < n_actions; ++i) {
        const double e_mu = qsim::expectation(state, readout.mu_obs[static_cast<std::size_t>(i)]);
        const double e_sigma =
            qsim::expectation(state, readout.sigma_obs[static_cast<std::size_t>(i)]);
        policy.mu[static_cast<std::size_t>(i)] = e_mu * params.w.value[static_cast<std::size_t>(i)];
        policy.sigma[static_cast<std::size_t>(i)] =
            std::exp(e_sigma * params.w.value[static_cast<std::size_t>(n_actions + i)]);
    }
    return policy;
}

double critic_forward(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                      const ReadoutConfig &readout, std::span<const double> s) {
    if (static_cast<int>(params.w.size()) != readout.critic_weight_count()) {
        throw ConfigError("critic_forward: weight count does not match readout");
    }
    const qsim::StateVector state = vqc::forward(plan, params, s);
    double value = 0.0;
    for (std::size_t i = 0; i < readout.value_obs.size(); ++i) {
        value += qsim::expectation(state, readout.value_obs[i]) * params.w.value[i];
    }
    return value;
}

QuantumActorCritic::QuantumActorCritic(const vqc::VqcConfig &actor_cfg,
                                       const vqc::VqcConfig &critic_cfg, std::mt19937_64 &rng,
                                       double theta_init_std)
    : actor_plan_(vqc::build_plan(actor_cfg)), critic_plan_(vqc::build_plan(critic_cfg)),
      actor_readout_(build_readout(actor_cfg.readout, actor_cfg.n_qubits(), actor_cfg.n_actions)),
      critic_readout_(build_readout(critic_cfg.readout, critic_cfg.n_qubits(), 1)),
      actor_params_(
          vqc::init_parameters(actor_plan_, actor_readout_.actor_weight_count(), rng,
                               theta_init_std)),
      critic_params_(
          vqc::init_parameters(critic_plan_, critic_readout_.critic_weight_count(), rng,
                               theta_init_std)),
      actor_engine_(actor_plan_.n_qubits), critic_engine_(critic_plan_.n_qubits) {
    if (actor_plan_.n_features != critic_plan_.n_features) {
        throw ConfigError("QuantumActorCritic: actor/critic observation widths differ");
    }
}

void QuantumActorCritic::evaluate(std::span<const double> obs, GaussianPolicy &policy,
                                  double &value) {
    const int n_actions = actor_readout_.n_actions;
    actor_engine_.run_forward(actor_plan_, actor_params_, obs);
    cached_mu_exp_.resize(static_cast<std::size_t>(n_actions));
    cached_sigma_exp_.resize(static_cast<std::size_t>(n_actions));
    policy.mu.resize(static_cast<std::size_t>(n_actions));
    policy.sigma.resize(static_cast<std::size_t>(n_actions));
    for (int i = 0; i < n_actions; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        cached_mu_exp_[idx] = qsim::expectation(actor_engine_.state(), actor_readout_.mu_obs[idx]);
        cached_sigma_exp_[idx] =
            qsim::expectation(actor_engine_.state(), actor_readout_.sigma_obs[idx]);
        policy.mu[idx] = cached_mu_exp_[idx] * actor_params_.w.value[idx];
        policy.sigma[idx] = std::exp(cached_sigma_exp_[idx] *
                                     actor_params_.w.value[static_cast<std::size_t>(n_actions) + idx]);
    }

    critic_engine_.run_forward(critic_plan_, critic_params_, obs);
    cached_value_exp_.resize(critic_readout_.value_obs.size());
    value = 0.0;
    for (std::size_t i = 0; i < critic_readout_.value_obs.size(); ++i) {
        cached_value_exp_[i] =
            qsim::expectation(critic_engine_.state(), critic_readout_.value_obs[i]);
        value += cached_value_exp_[i] * critic_params_.w.value[i];
    }

    cached_policy_ = policy;
    cache_valid_ = true;
}

void QuantumActorCritic::backprop(std::span<const double> d_mu, std::span<const double> d_sigma,
                                  double d_value) {
    if (!cache_valid_) {
        throw ConfigError("QuantumActorCritic: backprop without a preceding evaluate");
    }
    const int n_actions = actor_readout_.n_actions;
    if (d_mu.size() != static_cast<std::size_t>(n_actions) || d_sigma.size() != d_mu.size()) {
        throw ConfigError("QuantumActorCritic: loss-partial shape mismatch");
    }

    // Actor: dL/dw is linear in the cached expectations; the circuit part
    // collapses into one weighted diagonal observable per head.
    diff::WeightedZObservable actor_obs;
    bool actor_touched = false;
    for (int i = 0; i < n_actions; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double sigma = cached_policy_.sigma[idx];
        const double w_mu = actor_params_.w.value[idx];
        const double w_sigma = actor_params_.w.value[static_cast<std::size_t>(n_actions) + idx];

        actor_params_.w.grad[idx] += d_mu[idx] * cached_mu_exp_[idx];
        actor_params_.w.grad[static_cast<std::size_t>(n_actions) + idx] +=
            d_sigma[idx] * sigma * cached_sigma_exp_[idx];

        const double c_mu = d_mu[idx] * w_mu;
        const double c_sigma = d_sigma[idx] * sigma * w_sigma;
        if (c_mu != 0.0) {
            actor_obs.coefficients.push_back(c_mu);
            actor_obs.terms.push_back(actor_readout_.mu_obs[idx]);
            actor_touched = true;
        }
        if (c_sigma != 0.0) {
            actor_obs.coefficients.push_back(c_sigma);
            actor_obs.terms.push_back(actor_readout_.sigma_obs[idx]);
            actor_touched = true;
        }
    }
    if (actor_touched) {
        actor_engine_.run_backward(actor_plan_, actor_obs, 1.0, actor_params_.theta.grad,
                                   actor_params_.lambda.grad);
    }

    // Critic head.
    if (d_value != 0.0) {
        diff::WeightedZObservable critic_obs;
        critic_obs.coefficients.reserve(critic_readout_.value_obs.size());
        for (std::size_t i = 0; i < critic_readout_.value_obs.size(); ++i) {
            critic_params_.w.grad[i] += d_value * cached_value_exp_[i];
            critic_obs.coefficients.push_back(d_value * critic_params_.w.value[i]);
            critic_obs.terms.push_back(critic_readout_.value_obs[i]);
        }
        critic_engine_.run_backward(critic_plan_, critic_obs, 1.0, critic_params_.theta.grad,
                                    critic_params_.lambda.grad);
    }
}

std::vector<GroupRef> QuantumActorCritic::groups() {
    return {
        {"actor.lambda", LrGroup::InputScaling, &actor_params_.lambda},
        {"actor.theta", LrGroup::Variational, &actor_params_.theta},
        {"actor.w", LrGroup::OutputScaling, &actor_params_.w},
        {"critic.lambda", LrGroup::InputScaling, &critic_params_.lambda},
        {"critic.phi", LrGroup::Variational, &critic_params_.theta},
        {"critic.w", LrGroup::OutputScaling, &critic_params_.w},
    };
}

std::int64_t QuantumActorCritic::parameter_count() const {
    return static_cast<std::int64_t>(actor_params_.total_count() + critic_params_.total_count());
}

void actor_critic_gradients(QuantumActorCritic &agent, std::span<const double> states,
                            std::span<const double> d_mu, std::span<const double> d_sigma,
                            std::span<const double> d_value) {
    const auto obs_dim = static_cast<std::size_t>(agent.obs_dim());
    const auto act_dim = static_cast<std::size_t>(agent.action_dim());
    const std::size_t batch = d_value.size();
    if (states.size() != batch * obs_dim || d_mu.size() != batch * act_dim ||
        d_sigma.size() != batch * act_dim) {
        throw ConfigError("actor_critic_gradients: batch shape mismatch");
    }
    GaussianPolicy scratch;
    double value = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        agent.evaluate(states.subspan(b * obs_dim, obs_dim), scratch, value);
        agent.backprop(d_mu.subspan(b * act_dim, act_dim), d_sigma.subspan(b * act_dim, act_dim),
                       d_value[b]);
    }
}

} // namespace qppo::qpolicy
