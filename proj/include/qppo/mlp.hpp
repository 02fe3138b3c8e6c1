// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <span>
#include <vector>

#include "qppo/agent.hpp"

namespace qppo::qpolicy {

/**
 * Classical feed-forward baseline: actor input->hidden...->n_actions means
 * with rectified-linear hidden activations and a state-independent log-sigma
 * vector; critic input->hidden...->1. The benchmark configuration uses two
 * hidden layers of 64.
 *
 * Parameters live in two flat groups (actor, critic); layer l occupies
 * [weights row-major out x in][biases], with the actor's log-sigma vector at
 * the very end of the actor group.
 */
class MlpActorCritic final : public ActorCritic {
  public:
    MlpActorCritic(int obs_dim, int n_actions, std::vector<int> hidden, std::mt19937_64 &rng);

    int obs_dim() const override { return obs_dim_; }
    int action_dim() const override { return n_actions_; }

    void evaluate(std::span<const double> obs, GaussianPolicy &policy, double &value) override;
    void backprop(std::span<const double> d_mu, std::span<const double> d_sigma,
                  double d_value) override;

    std::vector<GroupRef> groups() override;
    std::int64_t parameter_count() const override;

    /// (in+1)*out per dense layer, plus the log-sigma vector for the actor.
    std::int64_t actor_parameter_count() const;
    std::int64_t critic_parameter_count() const;

    const std::vector<int> &hidden() const { return hidden_; }
    ParamGroup &actor_group() { return actor_; }
    ParamGroup &critic_group() { return critic_; }

  private:
    struct Net {
        std::vector<int> dims; // in, hidden..., out
        // per-layer offsets into the flat parameter vector
        std::vector<std::size_t> w_off;
        std::vector<std::size_t> b_off;
        std::size_t total = 0;
        // forward scratch: activations per layer boundary
        std::vector<std::vector<double>> act;
    };

    static Net make_net(int in, const std::vector<int> &hidden, int out);
    static void net_forward(const Net &net, const std::vector<double> &params,
                            std::span<const double> input, std::vector<std::vector<double>> &act);
    static void net_backward(const Net &net, const std::vector<double> &params,
                             const std::vector<std::vector<double>> &act,
                             std::span<const double> d_out, std::vector<double> &grad);

    int obs_dim_;
    int n_actions_;
    std::vector<int> hidden_;

    Net actor_net_;
    Net critic_net_;
    std::size_t log_sigma_off_ = 0;

    ParamGroup actor_;
    ParamGroup critic_;

    std::vector<std::vector<double>> actor_act_;
    std::vector<std::vector<double>> critic_act_;
    std::vector<double> cached_sigma_;
    bool cache_valid_ = false;
};

} // namespace qppo::qpolicy
