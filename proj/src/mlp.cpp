// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/mlp.hpp"

#include <cmath>

#include "qppo/errors.hpp"

namespace qppo::qpolicy {

MlpActorCritic::Net MlpActorCritic::make_net(int in, const std::vector<int> &hidden, int out) {
    Net net;
    net.dims.push_back(in);
    for (int h : hidden) {
        if (h < 1) {
            throw ConfigError("MlpActorCritic: hidden width must be >= 1");
        }
        net.dims.push_back(h);
    }
    net.dims.push_back(out);
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
        const auto fan_in = static_cast<std::size_t>(net.dims[l]);
        const auto fan_out = static_cast<std::size_t>(net.dims[l + 1]);
        net.w_off.push_back(off);
        off += fan_in * fan_out;
        net.b_off.push_back(off);
        off += fan_out;
    }
    net.total = off;
    return net;
}

MlpActorCritic::MlpActorCritic(int obs_dim, int n_actions, std::vector<int> hidden,
                               std::mt19937_64 &rng)
    : obs_dim_(obs_dim), n_actions_(n_actions), hidden_(std::move(hidden)) {
    if (obs_dim_ < 1 || n_actions_ < 1) {
        throw ConfigError("MlpActorCritic: dimensions must be positive");
    }
    actor_net_ = make_net(obs_dim_, hidden_, n_actions_);
    critic_net_ = make_net(obs_dim_, hidden_, 1);
    log_sigma_off_ = actor_net_.total;

    actor_.resize(actor_net_.total + static_cast<std::size_t>(n_actions_), 0.0);
    critic_.resize(critic_net_.total, 0.0);

    // Xavier-uniform weights, zero biases, log-sigma zero (sigma = 1).
    const auto init_net = [&rng](const Net &net, std::vector<double> &params) {
        for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
            const double limit = std::sqrt(6.0 / (net.dims[l] + net.dims[l + 1]));
            std::uniform_real_distribution<double> dist(-limit, limit);
            const auto count = static_cast<std::size_t>(net.dims[l]) *
                               static_cast<std::size_t>(net.dims[l + 1]);
            for (std::size_t i = 0; i < count; ++i) {
                params[net.w_off[l] + i] = dist(rng);
            }
        }
    };
    init_net(actor_net_, actor_.value);
    init_net(critic_net_, critic_.value);
}

void MlpActorCritic::net_forward(const Net &net, const std::vector<double> &params,
                                 std::span<const double> input,
                                 std::vector<std::vector<double>> &act) {
    const std::size_t n_layers = net.dims.size() - 1;
    act.resize(net.dims.size());
    act[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < n_layers; ++l) {
        const auto in = static_cast<std::size_t>(net.dims[l]);
        const auto out = static_cast<std::size_t>(net.dims[l + 1]);
        act[l + 1].assign(out, 0.0);
        const double *w = params.data() + net.w_off[l];
        const double *b = params.data() + net.b_off[l];
        const double *x = act[l].data();
        double *y = act[l + 1].data();
        for (std::size_t o = 0; o < out; ++o) {
            double acc = b[o];
            const double *row = w + o * in;
            for (std::size_t i = 0; i < in; ++i) {
                acc += row[i] * x[i];
            }
            // rectified-linear on hidden layers, identity on the output
            y[o] = (l + 1 < n_layers && acc < 0.0) ? 0.0 : acc;
        }
    }
}

void MlpActorCritic::net_backward(const Net &net, const std::vector<double> &params,
                                  const std::vector<std::vector<double>> &act,
                                  std::span<const double> d_out, std::vector<double> &grad) {
    const std::size_t n_layers = net.dims.size() - 1;
    std::vector<double> delta(d_out.begin(), d_out.end());
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto in = static_cast<std::size_t>(net.dims[l]);
        const auto out = static_cast<std::size_t>(net.dims[l + 1]);
        const double *x = act[l].data();
        const double *w = params.data() + net.w_off[l];
        double *gw = grad.data() + net.w_off[l];
        double *gb = grad.data() + net.b_off[l];
        std::vector<double> next_delta(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            if (d == 0.0) {
                continue;
            }
            gb[o] += d;
            double *grow = gw + o * in;
            const double *row = w + o * in;
            for (std::size_t i = 0; i < in; ++i) {
                grow[i] += d * x[i];
                next_delta[i] += d * row[i];
            }
        }
        if (l > 0) {
            // relu mask: units that were clamped to zero pass no gradient
            for (std::size_t i = 0; i < in; ++i) {
                if (act[l][i] == 0.0) {
                    next_delta[i] = 0.0;
                }
            }
        }
        delta = std::move(next_delta);
    }
}

void MlpActorCritic::evaluate(std::span<const double> obs, GaussianPolicy &policy, double &value) {
    if (obs.size() != static_cast<std::size_t>(obs_dim_)) {
        throw ConfigError("MlpActorCritic: observation size mismatch");
    }
    net_forward(actor_net_, actor_.value, obs, actor_act_);
    net_forward(critic_net_, critic_.value, obs, critic_act_);

    const auto n = static_cast<std::size_t>(n_actions_);
    policy.mu = actor_act_.back();
    policy.sigma.resize(n);
    cached_sigma_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cached_sigma_[i] = std::exp(actor_.value[log_sigma_off_ + i]);
        policy.sigma[i] = cached_sigma_[i];
    }
    value = critic_act_.back()[0];
    cache_valid_ = true;
}

void MlpActorCritic::backprop(std::span<const double> d_mu, std::span<const double> d_sigma,
                              double d_value) {
    if (!cache_valid_) {
        throw ConfigError("MlpActorCritic: backprop without a preceding evaluate");
    }
    if (d_mu.size() != static_cast<std::size_t>(n_actions_) || d_sigma.size() != d_mu.size()) {
        throw ConfigError("MlpActorCritic: loss-partial shape mismatch");
    }
    net_backward(actor_net_, actor_.value, actor_act_, d_mu, actor_.grad);
    for (std::size_t i = 0; i < d_sigma.size(); ++i) {
        // sigma = exp(log_sigma), so d(loss)/d(log_sigma) = d_sigma * sigma
        actor_.grad[log_sigma_off_ + i] += d_sigma[i] * cached_sigma_[i];
    }
    if (d_value != 0.0) {
        const double d[1] = {d_value};
        net_backward(critic_net_, critic_.value, critic_act_, d, critic_.grad);
    }
}

std::vector<GroupRef> MlpActorCritic::groups() {
    return {
        {"actor", LrGroup::Variational, &actor_},
        {"critic", LrGroup::Variational, &critic_},
    };
}

std::int64_t MlpActorCritic::actor_parameter_count() const {
    return static_cast<std::int64_t>(actor_.size());
}

std::int64_t MlpActorCritic::critic_parameter_count() const {
    return static_cast<std::int64_t>(critic_.size());
}

std::int64_t MlpActorCritic::parameter_count() const {
    return actor_parameter_count() + critic_parameter_count();
}

} // namespace qppo::qpolicy
