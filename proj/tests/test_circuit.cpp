// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qppo/circuit.hpp"

using namespace qppo;
using vqc::AngleBinding;
using vqc::CircuitPlan;
using vqc::EmbeddingMode;
using vqc::EntanglerKind;
using vqc::FeatureBounds;
using vqc::ParameterStore;
using vqc::VqcConfig;

namespace {

constexpr double kPi = std::numbers::pi;

ParameterStore zero_init(const CircuitPlan &plan, int n_weights, double lambda_value) {
    ParameterStore params;
    params.lambda.resize(static_cast<std::size_t>(plan.n_lambda_slots), lambda_value);
    params.theta.resize(static_cast<std::size_t>(plan.n_theta_slots), 0.0);
    params.w.resize(static_cast<std::size_t>(n_weights), 1.0);
    return params;
}

} // namespace

TEST_SUITE_BEGIN("vqc");

TEST_CASE("normalize_features maps bounds onto [-pi/2, pi/2]") {
    const std::vector<FeatureBounds> bounds{{-1.0, 1.0}, {-1.0, 1.0}, {-8.0, 8.0}};

    const auto mid = vqc::normalize_features(std::vector<double>{0.0, 0.0, 0.0}, bounds);
    CHECK(mid[0] == doctest::Approx(0.0));
    CHECK(mid[1] == doctest::Approx(0.0));
    CHECK(mid[2] == doctest::Approx(0.0));

    const auto hi = vqc::normalize_features(std::vector<double>{1.0, 0.0, 8.0}, bounds);
    CHECK(hi[0] == doctest::Approx(kPi / 2.0));
    CHECK(hi[1] == doctest::Approx(0.0));
    CHECK(hi[2] == doctest::Approx(kPi / 2.0));

    const auto mixed = vqc::normalize_features(std::vector<double>{-1.0, 0.5, -4.0}, bounds);
    CHECK(mixed[0] == doctest::Approx(-kPi / 2.0));
    CHECK(mixed[1] == doctest::Approx(kPi / 4.0));
    CHECK(mixed[2] == doctest::Approx(-kPi / 4.0));
}

TEST_CASE("normalize_features clips and validates") {
    const std::vector<FeatureBounds> bounds{{-1.0, 1.0}};
    const auto clipped = vqc::normalize_features(std::vector<double>{5.0}, bounds);
    CHECK(clipped[0] == doctest::Approx(kPi / 2.0));
    CHECK_THROWS_AS(vqc::normalize_features(std::vector<double>{std::nan("")}, bounds),
                    NumericError);
    CHECK_THROWS_AS(
        vqc::normalize_features(std::vector<double>{0.0}, std::vector<FeatureBounds>{{1.0, 1.0}}),
        ConfigError);
}

TEST_CASE("embed_angle variants") {
    CHECK(vqc::embed_angle(kPi / 2.0, 1.0, EmbeddingMode::NormIdentity) ==
          doctest::Approx(kPi / 2.0));
    CHECK(vqc::embed_angle(1.0, 2.0, EmbeddingMode::RawArctan) ==
          doctest::Approx(1.10714871779).epsilon(1e-10));
    CHECK(vqc::embed_angle(0.8, 0.0, EmbeddingMode::NormIdentity) == 0.0);
    CHECK(vqc::embed_angle(0.8, 0.0, EmbeddingMode::NormArctan) == 0.0);
}

TEST_CASE("embedding ranges") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> feature(-kPi / 2.0, kPi / 2.0);
    std::uniform_real_distribution<double> lam(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double s = feature(rng);
        const double l = lam(rng);
        const double arct = vqc::embed_angle(s, l, EmbeddingMode::NormArctan);
        CHECK(arct > -kPi / 2.0);
        CHECK(arct < kPi / 2.0);
        const double sig = vqc::embed_angle(s, l, EmbeddingMode::NormSigmoid);
        CHECK(sig > 0.0);
        CHECK(sig < 1.0);
    }
}

TEST_CASE("build_plan block structure and gate count") {
    VqcConfig config;
    config.n_features = 3;
    config.stack_factor = 1;
    config.n_layers = 1;
    const CircuitPlan plan = vqc::build_plan(config);
    CHECK(plan.n_qubits == 3);
    REQUIRE(plan.gates.size() == 11);

    int encoding = 0;
    int variational = 0;
    int entangling = 0;
    for (const auto &gate : plan.gates) {
        switch (gate.binding.source) {
        case AngleBinding::Source::Encoding:
            ++encoding;
            break;
        case AngleBinding::Source::Variational:
            ++variational;
            break;
        case AngleBinding::Source::None:
            ++entangling;
            break;
        }
    }
    CHECK(encoding == 6);
    CHECK(variational == 3);
    CHECK(entangling == 2);
}

TEST_CASE("plan blocks appear in order within every layer") {
    VqcConfig config;
    config.n_features = 2;
    config.stack_factor = 2;
    config.n_layers = 3;
    const CircuitPlan plan = vqc::build_plan(config);
    const int n = plan.n_qubits;
    const std::size_t per_layer = static_cast<std::size_t>(4 * n - 1);
    REQUIRE(plan.gates.size() == per_layer * 3);

    for (int layer = 0; layer < 3; ++layer) {
        const std::size_t base = per_layer * static_cast<std::size_t>(layer);
        for (int q = 0; q < n; ++q) {
            const auto &ry = plan.gates[base + 2 * static_cast<std::size_t>(q)];
            const auto &rz = plan.gates[base + 2 * static_cast<std::size_t>(q) + 1];
            CHECK(ry.kind == qsim::GateKind::RY);
            CHECK(rz.kind == qsim::GateKind::RZ);
            CHECK(ry.binding.source == AngleBinding::Source::Encoding);
            // RY/RZ pair shares the feature and the lambda slot
            CHECK(ry.binding.feature == rz.binding.feature);
            CHECK(ry.binding.lambda_slot == rz.binding.lambda_slot);
            CHECK(ry.binding.lambda_slot == layer * n + q);
        }
        for (int q = 0; q < n; ++q) {
            const auto &var = plan.gates[base + static_cast<std::size_t>(2 * n + q)];
            CHECK(var.kind == qsim::GateKind::RY);
            CHECK(var.binding.source == AngleBinding::Source::Variational);
            CHECK(var.binding.theta_slot == layer * n + q);
        }
        for (int q = 0; q + 1 < n; ++q) {
            const auto &ent = plan.gates[base + static_cast<std::size_t>(3 * n + q)];
            CHECK(ent.binding.source == AngleBinding::Source::None);
            CHECK(ent.control == q);
            CHECK(ent.target == q + 1);
        }
    }
}

TEST_CASE("stacked plans re-encode features modulo n_features") {
    VqcConfig config;
    config.n_features = 3;
    config.stack_factor = 2;
    config.n_layers = 1;
    const CircuitPlan plan = vqc::build_plan(config);
    CHECK(plan.n_qubits == 6);
    for (int q = 0; q < 6; ++q) {
        CHECK(plan.gates[static_cast<std::size_t>(2 * q)].binding.feature == q % 3);
    }

    config.stack_factor = 3;
    CHECK(vqc::build_plan(config).n_qubits == 9);
}

TEST_CASE("forward with all-zero parameters is the identity") {
    VqcConfig config;
    config.n_features = 3;
    config.n_layers = 2;
    config.embedding = EmbeddingMode::NormIdentity;
    config.entangler = EntanglerKind::CnotChain;
    const CircuitPlan plan = vqc::build_plan(config);
    ParameterStore params = zero_init(plan, 2, 0.0); // lambda = 0 as well
    const std::vector<double> s{0.4, -0.9, 1.2};
    const auto state = vqc::forward(plan, params, s);
    CHECK(std::abs(state.amplitudes()[0] - std::complex<double>{1.0, 0.0}) < 1e-12);
    for (int q = 0; q < 3; ++q) {
        CHECK(qsim::expectation(state, qsim::ZProductObservable({q})) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-qubit forward gives <Z> = cos(s)") {
    VqcConfig config;
    config.n_features = 1;
    config.n_layers = 1;
    const CircuitPlan plan = vqc::build_plan(config);
    ParameterStore params = zero_init(plan, 2, 1.0);
    const std::vector<double> s{0.7};
    const auto state = vqc::forward(plan, params, s);
    CHECK(qsim::expectation(state, qsim::ZProductObservable({0})) ==
          doctest::Approx(std::cos(0.7)).epsilon(1e-12));
}

TEST_CASE("forward is deterministic") {
    std::mt19937_64 rng(5);
    const VqcConfig config = [] {
        VqcConfig c;
        c.n_features = 3;
        c.n_layers = 4;
        return c;
    }();
    const CircuitPlan plan = vqc::build_plan(config);
    const ParameterStore params = oracles::random_params(plan, 2, rng);
    const std::vector<double> s = oracles::random_features(3, rng);
    const auto a = vqc::forward(plan, params, s);
    const auto b = vqc::forward(plan, params, s);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.amplitudes()[k] == b.amplitudes()[k]);
    }
}

TEST_CASE("relabeling qubits and features together is a symmetry") {
    std::mt19937_64 rng(7);
    VqcConfig config;
    config.n_features = 3;
    config.n_layers = 2;
    const CircuitPlan plan = vqc::build_plan(config);
    const ParameterStore params = oracles::random_params(plan, 2, rng);
    const std::vector<double> s = oracles::random_features(3, rng);

    const std::array<int, 3> perm{2, 0, 1}; // qubit q -> perm[q]

    // permuted plan: every wire relabeled (including entangler endpoints)
    CircuitPlan permuted = plan;
    for (auto &gate : permuted.gates) {
        gate.target = perm[static_cast<std::size_t>(gate.target)];
        if (gate.control >= 0) {
            gate.control = perm[static_cast<std::size_t>(gate.control)];
        }
    }
    // parameters/features follow their qubit: slot (l, q) -> (l, perm[q])
    ParameterStore pparams = params;
    std::vector<double> ps(3);
    for (int l = 0; l < 2; ++l) {
        for (int q = 0; q < 3; ++q) {
            const auto src = static_cast<std::size_t>(3 * l + q);
            const auto dst = static_cast<std::size_t>(3 * l + perm[static_cast<std::size_t>(q)]);
            pparams.lambda.value[dst] = params.lambda.value[src];
            pparams.theta.value[dst] = params.theta.value[src];
        }
    }
    for (int q = 0; q < 3; ++q) {
        ps[static_cast<std::size_t>(perm[static_cast<std::size_t>(q)])] =
            s[static_cast<std::size_t>(q)];
    }
    // the permuted plan still encodes feature (original q) on wire perm[q]
    for (auto &gate : permuted.gates) {
        if (gate.binding.source == AngleBinding::Source::Encoding) {
            gate.binding.feature = gate.target; // feature index == new wire (features permuted)
            gate.binding.lambda_slot =
                (gate.binding.lambda_slot / 3) * 3 + gate.target; // same layer, new wire slot
        } else if (gate.binding.source == AngleBinding::Source::Variational) {
            gate.binding.theta_slot = (gate.binding.theta_slot / 3) * 3 + gate.target;
        }
    }

    const auto base = vqc::forward(plan, params, s);
    const auto moved = vqc::forward(permuted, pparams, ps);
    for (int q = 0; q < 3; ++q) {
        const double original = qsim::expectation(base, qsim::ZProductObservable({q}));
        const double relabeled = qsim::expectation(
            moved, qsim::ZProductObservable({perm[static_cast<std::size_t>(q)]}));
        CHECK(original == doctest::Approx(relabeled).epsilon(1e-10));
    }
}

TEST_CASE("stacked halves agree before the first entangler") {
    VqcConfig config;
    config.n_features = 3;
    config.stack_factor = 2;
    config.n_layers = 1;
    const CircuitPlan plan = vqc::build_plan(config);
    ParameterStore params = zero_init(plan, 2, 1.3); // all lambda equal, theta zero
    const std::vector<double> s{0.3, -0.8, 1.1};

    qsim::StateVector state(plan.n_qubits);
    for (const auto &gate : plan.gates) {
        if (gate.binding.source == AngleBinding::Source::None) {
            break; // stop at the entangling block
        }
        state.apply(gate.kind, gate.control, gate.target,
                    vqc::gate_angle(gate, params, s, plan.embedding));
    }
    for (int q = 0; q < 3; ++q) {
        const double first = qsim::expectation(state, qsim::ZProductObservable({q}));
        const double second = qsim::expectation(state, qsim::ZProductObservable({q + 3}));
        CHECK(first == doctest::Approx(second).epsilon(1e-12));
    }
}

TEST_CASE("count_parameters reproduces the published totals") {
    VqcConfig actor;
    actor.n_features = 3;
    actor.stack_factor = 2; // 6 qubits
    actor.n_layers = 7;
    actor.readout = ReadoutId::M1;
    actor.n_actions = 1;
    VqcConfig critic = actor;
    critic.n_actions = 1;
    CHECK(vqc::count_parameters(actor, critic) == 176);

    VqcConfig actor2 = actor;
    actor2.n_features = 6;
    actor2.stack_factor = 1;
    actor2.n_actions = 2;
    VqcConfig critic2 = actor2;
    critic2.n_actions = 1;
    CHECK(vqc::count_parameters(actor2, critic2) == 178);

    VqcConfig small;
    small.n_features = 3;
    small.n_layers = 5;
    small.readout = ReadoutId::M1;
    small.n_actions = 1;
    CHECK(vqc::count_parameters(small, small) == 65);
}

TEST_CASE("config validation rejects inconsistent sizes") {
    VqcConfig config;
    config.n_features = 0;
    CHECK_THROWS_AS(vqc::build_plan(config), ConfigError);
    config.n_features = 3;
    config.n_layers = 0;
    CHECK_THROWS_AS(vqc::build_plan(config), ConfigError);
    config.n_layers = 1;
    config.stack_factor = 5; // 15 qubits
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("forward validates observation length") {
    VqcConfig config;
    config.n_features = 3;
    const CircuitPlan plan = vqc::build_plan(config);
    ParameterStore params = zero_init(plan, 2, 1.0);
    CHECK_THROWS_AS(vqc::forward(plan, params, std::vector<double>{1.0, 2.0}), ConfigError);
}

TEST_SUITE_END();
