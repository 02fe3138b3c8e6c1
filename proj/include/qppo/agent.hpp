// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qppo/gaussian.hpp"
#include "qppo/params.hpp"

namespace qppo {

/// A named parameter group together with the learning-rate bucket it belongs to.
struct GroupRef {
    std::string name;
    LrGroup lr_group = LrGroup::Variational;
    ParamGroup *group = nullptr;
};

/**
 * Actor-critic function approximator trained by the PPO loop.
 *
 * evaluate() runs both heads for one observation and caches the intermediates
 * needed by backprop(); backprop() pushes loss partials (w.r.t. the policy
 * mean/stddev and the value) into the gradient accumulators of the parameter
 * groups. backprop() must follow an evaluate() on the same observation.
 */
class ActorCritic {
  public:
    virtual ~ActorCritic() = default;

    virtual int obs_dim() const = 0;
    virtual int action_dim() const = 0;

    virtual void evaluate(std::span<const double> obs, qpolicy::GaussianPolicy &policy,
                          double &value) = 0;
    virtual void backprop(std::span<const double> d_mu, std::span<const double> d_sigma,
                          double d_value) = 0;

    virtual std::vector<GroupRef> groups() = 0;
    virtual std::int64_t parameter_count() const = 0;

    void zero_grads() {
        for (auto &g : groups()) {
            g.group->zero_grad();
        }
    }

    qpolicy::GaussianPolicy policy(std::span<const double> obs) {
        qpolicy::GaussianPolicy pol;
        double v = 0.0;
        evaluate(obs, pol, v);
        return pol;
    }

    double value(std::span<const double> obs) {
        qpolicy::GaussianPolicy pol;
        double v = 0.0;
        evaluate(obs, pol, v);
        return v;
    }
};

} // namespace qppo
