// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <random>
#include <span>
#include <vector>

#include "qppo/agent.hpp"
#include "qppo/circuit.hpp"
#include "qppo/gaussian.hpp"
#include "qppo/gradients.hpp"
#include "qppo/readout.hpp"

namespace qppo::qpolicy {

/// mu_i = <O_mu_i> * w_mu_i, sigma_i = exp(<O_sigma_i> * w_sigma_i).
GaussianPolicy actor_forward(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                             const ReadoutConfig &readout, std::span<const double> s);

/// V = sum_i <O_v_i> * w_v_i.
double critic_forward(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                      const ReadoutConfig &readout, std::span<const double> s);

/**
 * Quantum actor-critic pair: two circuits sharing nothing, each with its own
 * lambda/theta/w store and readout. The actor weight layout is
 * [w_mu..., w_sigma...]; the critic weights follow the readout's value
 * observables. Gradients flow through the readout postprocessing into a
 * single weighted-observable adjoint sweep per head.
 */
class QuantumActorCritic final : public ActorCritic {
  public:
    QuantumActorCritic(const vqc::VqcConfig &actor_cfg, const vqc::VqcConfig &critic_cfg,
                       std::mt19937_64 &rng, double theta_init_std = 0.1);

    int obs_dim() const override { return actor_plan_.n_features; }
    int action_dim() const override { return actor_readout_.n_actions; }

    void evaluate(std::span<const double> obs, GaussianPolicy &policy, double &value) override;
    void backprop(std::span<const double> d_mu, std::span<const double> d_sigma,
                  double d_value) override;

    std::vector<GroupRef> groups() override;
    std::int64_t parameter_count() const override;

    const vqc::CircuitPlan &actor_plan() const { return actor_plan_; }
    const vqc::CircuitPlan &critic_plan() const { return critic_plan_; }
    const ReadoutConfig &actor_readout() const { return actor_readout_; }
    const ReadoutConfig &critic_readout() const { return critic_readout_; }
    vqc::ParameterStore &actor_params() { return actor_params_; }
    vqc::ParameterStore &critic_params() { return critic_params_; }
    const vqc::ParameterStore &actor_params() const { return actor_params_; }
    const vqc::ParameterStore &critic_params() const { return critic_params_; }

  private:
    vqc::CircuitPlan actor_plan_;
    vqc::CircuitPlan critic_plan_;
    ReadoutConfig actor_readout_;
    ReadoutConfig critic_readout_;
    vqc::ParameterStore actor_params_;
    vqc::ParameterStore critic_params_;

    diff::AdjointEngine actor_engine_;
    diff::AdjointEngine critic_engine_;

    // Cache of the most recent evaluate(), consumed by backprop().
    std::vector<double> cached_mu_exp_;
    std::vector<double> cached_sigma_exp_;
    std::vector<double> cached_value_exp_;
    GaussianPolicy cached_policy_;
    bool cache_valid_ = false;
};

/**
 * Batch form of the chain rule through the readout: accumulates the gradient
 * of a scalar loss into the agent's parameter groups given the loss partials
 * with respect to mu, sigma and V for every state in the batch. Existing
 * accumulator contents are kept (call zero_grads() first for a fresh sum).
 */
void actor_critic_gradients(QuantumActorCritic &agent, std::span<const double> states,
                            std::span<const double> d_mu, std::span<const double> d_sigma,
                            std::span<const double> d_value);

} // namespace qppo::qpolicy
