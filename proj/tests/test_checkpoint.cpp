// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qppo/checkpoint.hpp"

using namespace qppo;

TEST_SUITE_BEGIN("checkpoint");

TEST_CASE("plan serialization round-trips structurally") {
    vqc::VqcConfig config;
    config.n_features = 3;
    config.stack_factor = 2;
    config.n_layers = 3;
    config.embedding = vqc::EmbeddingMode::NormArctan;
    config.entangler = vqc::EntanglerKind::CzChain;
    const vqc::CircuitPlan plan = vqc::build_plan(config);

    const auto text = checkpoint::plan_to_json(plan).dump();
    const vqc::CircuitPlan loaded = checkpoint::plan_from_json(nlohmann::json::parse(text));
    REQUIRE(loaded.gates.size() == plan.gates.size());
    CHECK(loaded.n_qubits == plan.n_qubits);
    CHECK(loaded.embedding == plan.embedding);
    for (std::size_t i = 0; i < plan.gates.size(); ++i) {
        CHECK(loaded.gates[i].kind == plan.gates[i].kind);
        CHECK(loaded.gates[i].target == plan.gates[i].target);
        CHECK(loaded.gates[i].control == plan.gates[i].control);
        CHECK(loaded.gates[i].binding.source == plan.gates[i].binding.source);
        CHECK(loaded.gates[i].binding.feature == plan.gates[i].binding.feature);
        CHECK(loaded.gates[i].binding.lambda_slot == plan.gates[i].binding.lambda_slot);
        CHECK(loaded.gates[i].binding.theta_slot == plan.gates[i].binding.theta_slot);
    }
}

TEST_CASE("parameter values survive a text round-trip bit-exactly") {
    std::mt19937_64 rng(101);
    vqc::VqcConfig config;
    config.n_features = 3;
    config.n_layers = 4;
    const vqc::CircuitPlan plan = vqc::build_plan(config);
    const vqc::ParameterStore params = oracles::random_params(plan, 5, rng);

    const std::string text = checkpoint::params_to_json(params).dump();
    const vqc::ParameterStore loaded =
        checkpoint::params_from_json(nlohmann::json::parse(text));
    CHECK(loaded.lambda.value == params.lambda.value);
    CHECK(loaded.theta.value == params.theta.value);
    CHECK(loaded.w.value == params.w.value);
}

TEST_CASE("quantum agent snapshots restore identical behavior") {
    std::mt19937_64 rng(103);
    vqc::VqcConfig config;
    config.n_features = 3;
    config.n_layers = 3;
    qpolicy::QuantumActorCritic original(config, config, rng);
    const auto snapshot = checkpoint::quantum_agent_to_json(original);

    std::mt19937_64 other_rng(999);
    qpolicy::QuantumActorCritic restored(config, config, other_rng);
    checkpoint::load_quantum_agent(restored, nlohmann::json::parse(snapshot.dump()));

    const std::vector<double> s = oracles::random_features(3, rng);
    const auto pol_a = original.policy(s);
    const auto pol_b = restored.policy(s);
    CHECK(pol_a.mu == pol_b.mu);
    CHECK(pol_a.sigma == pol_b.sigma);
    CHECK(original.value(s) == restored.value(s));
}

TEST_CASE("mlp snapshots restore identical behavior") {
    std::mt19937_64 rng(107);
    qpolicy::MlpActorCritic original(3, 1, {8, 8}, rng);
    const auto snapshot = checkpoint::mlp_agent_to_json(original);

    std::mt19937_64 other_rng(5);
    qpolicy::MlpActorCritic restored(3, 1, {8, 8}, other_rng);
    checkpoint::load_mlp_agent(restored, nlohmann::json::parse(snapshot.dump()));

    const std::vector<double> s{0.2, -0.4, 1.0};
    const auto pol_a = original.policy(s);
    const auto pol_b = restored.policy(s);
    CHECK(pol_a.mu == pol_b.mu);
    CHECK(original.value(s) == restored.value(s));
}

TEST_CASE("size mismatches are rejected on load") {
    std::mt19937_64 rng(109);
    vqc::VqcConfig config;
    config.n_features = 3;
    config.n_layers = 2;
    qpolicy::QuantumActorCritic agent(config, config, rng);
    auto snapshot = checkpoint::quantum_agent_to_json(agent);
    snapshot["actor"]["params"]["theta"].push_back(0.0);
    CHECK_THROWS_AS(checkpoint::load_quantum_agent(agent, snapshot), ConfigError);
}

TEST_SUITE_END();
