// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "qppo/mlp.hpp"

using namespace qppo;
using qpolicy::GaussianPolicy;
using qpolicy::MlpActorCritic;

TEST_SUITE_BEGIN("mlp");

TEST_CASE("zero weights produce zero outputs") {
    std::mt19937_64 rng(1);
    MlpActorCritic agent(3, 1, {64, 64}, rng);
    std::fill(agent.actor_group().value.begin(), agent.actor_group().value.end(), 0.0);
    std::fill(agent.critic_group().value.begin(), agent.critic_group().value.end(), 0.0);

    GaussianPolicy policy;
    double value = 0.0;
    agent.evaluate(std::vector<double>{0.3, -0.7, 2.0}, policy, value);
    CHECK(policy.mu[0] == 0.0);
    CHECK(value == 0.0);
    CHECK(policy.sigma[0] == 1.0); // log-sigma zero
}

TEST_CASE("parameter counts follow the dense-layer arithmetic") {
    std::mt19937_64 rng(2);
    MlpActorCritic agent(3, 1, {64, 64}, rng);
    // oracle: sum over layers of (in+1)*out, plus one log-sigma per action
    const auto dense_total = [](std::vector<int> dims) {
        std::int64_t total = 0;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            total += static_cast<std::int64_t>(dims[l] + 1) * dims[l + 1];
        }
        return total;
    };
    const std::int64_t actor_expected = dense_total({3, 64, 64, 1}) + 1;
    const std::int64_t critic_expected = dense_total({3, 64, 64, 1});
    CHECK(actor_expected == 4482);
    CHECK(critic_expected == 4481);
    CHECK(agent.actor_parameter_count() == actor_expected);
    CHECK(agent.critic_parameter_count() == critic_expected);
    CHECK(agent.parameter_count() == 8963);
}

TEST_CASE("gradients match finite differences") {
    std::mt19937_64 rng(3);
    MlpActorCritic agent(3, 2, {8, 8}, rng);
    const std::vector<double> obs{0.4, -1.2, 0.9};

    const std::vector<double> a{0.7, -0.2};
    const std::vector<double> b{0.3, 1.1};
    const double c = -0.8;
    const auto loss_at = [&]() {
        GaussianPolicy pol;
        double v = 0.0;
        agent.evaluate(obs, pol, v);
        double loss = c * v;
        for (std::size_t i = 0; i < 2; ++i) {
            loss += a[i] * pol.mu[i] + b[i] * pol.sigma[i];
        }
        return loss;
    };

    GaussianPolicy policy;
    double value = 0.0;
    agent.evaluate(obs, policy, value);
    agent.zero_grads();
    agent.backprop(a, b, c);

    const double h = 1e-6;
    for (auto &ref : agent.groups()) {
        for (std::size_t i = 0; i < ref.group->size(); ++i) {
            const double keep = ref.group->value[i];
            ref.group->value[i] = keep + h;
            const double up = loss_at();
            ref.group->value[i] = keep - h;
            const double down = loss_at();
            ref.group->value[i] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double denom = std::max({std::abs(fd), std::abs(ref.group->grad[i]), 1.0});
            CHECK(std::abs(ref.group->grad[i] - fd) / denom < 1e-5);
        }
    }
}

TEST_CASE("negative pre-activations pass no gradient") {
    std::mt19937_64 rng(4);
    MlpActorCritic agent(1, 1, {1}, rng);
    // actor layout: W1(1), b1(1), W2(1), b2(1), log_sigma(1)
    auto &actor = agent.actor_group().value;
    actor[0] = -1.0; // W1
    actor[1] = 0.0;  // b1 -> hidden pre-activation = -x
    actor[2] = 3.0;  // W2
    actor[3] = 0.5;  // b2

    GaussianPolicy policy;
    double value = 0.0;
    agent.evaluate(std::vector<double>{1.0}, policy, value);
    CHECK(policy.mu[0] == 0.5); // relu clamps the hidden unit

    agent.zero_grads();
    agent.backprop(std::vector<double>{1.0}, std::vector<double>{0.0}, 0.0);
    CHECK(agent.actor_group().grad[0] == 0.0); // W1 unreachable through the dead unit
    CHECK(agent.actor_group().grad[2] == 0.0); // dead unit contributes nothing to W2 either
    CHECK(agent.actor_group().grad[3] == 1.0); // output bias still flows
}

TEST_CASE("initialization is deterministic per seed") {
    std::mt19937_64 rng_a(7);
    std::mt19937_64 rng_b(7);
    MlpActorCritic a(3, 1, {16, 16}, rng_a);
    MlpActorCritic b(3, 1, {16, 16}, rng_b);
    CHECK(a.actor_group().value == b.actor_group().value);
    CHECK(a.critic_group().value == b.critic_group().value);
}

TEST_SUITE_END();
