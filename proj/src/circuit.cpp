// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qppo::vqc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

std::string to_string(EmbeddingMode mode) {
    switch (mode) {
    case EmbeddingMode::RawArctan:
        return "raw-arctan";
    case EmbeddingMode::RawSigmoid:
        return "raw-sigmoid";
    case EmbeddingMode::NormIdentity:
        return "norm-identity";
    case EmbeddingMode::NormArctan:
        return "norm-arctan";
    case EmbeddingMode::NormSigmoid:
        return "norm-sigmoid";
    }
    return "?";
}

EmbeddingMode embedding_from_string(const std::string &name) {
    for (auto mode : {EmbeddingMode::RawArctan, EmbeddingMode::RawSigmoid,
                      EmbeddingMode::NormIdentity, EmbeddingMode::NormArctan,
                      EmbeddingMode::NormSigmoid}) {
        if (name == to_string(mode)) {
            return mode;
        }
    }
    throw ConfigError("unknown embedding mode '" + name + "'");
}

std::string to_string(EntanglerKind kind) {
    return kind == EntanglerKind::CnotChain ? "cnot-chain" : "cz-chain";
}

EntanglerKind entangler_from_string(const std::string &name) {
    if (name == "cnot-chain") {
        return EntanglerKind::CnotChain;
    }
    if (name == "cz-chain") {
        return EntanglerKind::CzChain;
    }
    throw ConfigError("unknown entangler '" + name + "'");
}

void VqcConfig::validate() const {
    if (n_features < 1) {
        throw ConfigError("VqcConfig: n_features must be >= 1");
    }
    if (stack_factor < 1) {
        throw ConfigError("VqcConfig: stack_factor must be >= 1");
    }
    if (n_layers < 1) {
        throw ConfigError("VqcConfig: n_layers must be >= 1");
    }
    if (n_actions < 1) {
        throw ConfigError("VqcConfig: n_actions must be >= 1");
    }
    if (n_qubits() > qsim::kMaxQubits) {
        throw ConfigError("VqcConfig: " + std::to_string(n_qubits()) + " qubits exceeds the " +
                          std::to_string(qsim::kMaxQubits) + "-qubit cap");
    }
    // Throws if the readout demands collide after the modular wrap.
    qpolicy::build_readout(readout, n_qubits(), n_actions);
}

ParameterStore init_parameters(const CircuitPlan &plan, int n_weights, std::mt19937_64 &rng,
                               double theta_std) {
    ParameterStore store;
    store.lambda.resize(static_cast<std::size_t>(plan.n_lambda_slots), 1.0);
    store.theta.resize(static_cast<std::size_t>(plan.n_theta_slots), 0.0);
    store.w.resize(static_cast<std::size_t>(n_weights), 1.0);
    std::normal_distribution<double> normal(0.0, theta_std);
    for (auto &t : store.theta.value) {
        t = normal(rng);
    }
    return store;
}

std::vector<double> normalize_features(std::span<const double> s,
                                       std::span<const FeatureBounds> bounds) {
    if (s.size() != bounds.size()) {
        throw ConfigError("normalize_features: feature/bounds size mismatch");
    }
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto [low, high] = bounds[i];
        if (!(low < high)) {
            throw ConfigError("normalize_features: bounds must satisfy low < high");
        }
        if (!std::isfinite(s[i])) {
            throw NumericError("normalize_features: non-finite feature " + std::to_string(i));
        }
        const double clipped = std::clamp(s[i], low, high);
        const double mid = 0.5 * (low + high);
        out[i] = (clipped - mid) / (high - low) * std::numbers::pi;
    }
    return out;
}

double embed_angle(double feature, double lambda, EmbeddingMode mode) {
    const double scaled = feature * lambda;
    switch (mode) {
    case EmbeddingMode::NormIdentity:
        return scaled;
    case EmbeddingMode::RawArctan:
    case EmbeddingMode::NormArctan:
        return std::atan(scaled);
    case EmbeddingMode::RawSigmoid:
    case EmbeddingMode::NormSigmoid:
        return sigmoid(scaled);
    }
    throw ConfigError("embed_angle: unknown mode");
}

double embed_angle_dlambda(double feature, double lambda, EmbeddingMode mode) {
    const double scaled = feature * lambda;
    switch (mode) {
    case EmbeddingMode::NormIdentity:
        return feature;
    case EmbeddingMode::RawArctan:
    case EmbeddingMode::NormArctan:
        return feature / (1.0 + scaled * scaled);
    case EmbeddingMode::RawSigmoid:
    case EmbeddingMode::NormSigmoid: {
        const double sig = sigmoid(scaled);
        return feature * sig * (1.0 - sig);
    }
    }
    throw ConfigError("embed_angle_dlambda: unknown mode");
}

CircuitPlan build_plan(const VqcConfig &config) {
    config.validate();
    CircuitPlan plan;
    plan.n_qubits = config.n_qubits();
    plan.n_features = config.n_features;
    plan.embedding = config.embedding;
    plan.n_lambda_slots = plan.n_qubits * config.n_layers;
    plan.n_theta_slots = plan.n_qubits * config.n_layers;
    plan.gates.reserve(static_cast<std::size_t>(config.n_layers) * (4 * plan.n_qubits - 1));

    const qsim::GateKind entangler =
        config.entangler == EntanglerKind::CnotChain ? qsim::GateKind::CNOT : qsim::GateKind::CZ;

    for (int layer = 0; layer < config.n_layers; ++layer) {
        for (int q = 0; q < plan.n_qubits; ++q) {
            AngleBinding binding;
            binding.source = AngleBinding::Source::Encoding;
            binding.feature = q % config.n_features;
            binding.lambda_slot = layer * plan.n_qubits + q;
            plan.gates.push_back({qsim::GateKind::RY, q, -1, binding});
            plan.gates.push_back({qsim::GateKind::RZ, q, -1, binding});
        }
        for (int q = 0; q < plan.n_qubits; ++q) {
            AngleBinding binding;
            binding.source = AngleBinding::Source::Variational;
            binding.theta_slot = layer * plan.n_qubits + q;
            plan.gates.push_back({qsim::GateKind::RY, q, -1, binding});
        }
        for (int q = 0; q + 1 < plan.n_qubits; ++q) {
            plan.gates.push_back({entangler, q + 1, q, AngleBinding{}});
        }
    }
    return plan;
}

double gate_angle(const Gate &gate, const ParameterStore &params, std::span<const double> s,
                  EmbeddingMode mode) {
    switch (gate.binding.source) {
    case AngleBinding::Source::Encoding:
        return embed_angle(s[static_cast<std::size_t>(gate.binding.feature)],
                           params.lambda.value[static_cast<std::size_t>(gate.binding.lambda_slot)],
                           mode);
    case AngleBinding::Source::Variational:
        return params.theta.value[static_cast<std::size_t>(gate.binding.theta_slot)];
    case AngleBinding::Source::None:
        break;
    }
    throw ConfigError("gate_angle: gate has no angle binding");
}

void forward_into(const CircuitPlan &plan, const ParameterStore &params,
                  std::span<const double> s, qsim::StateVector &out) {
    if (static_cast<int>(s.size()) != plan.n_features) {
        throw ConfigError("forward: observation length " + std::to_string(s.size()) +
                          " != n_features " + std::to_string(plan.n_features));
    }
    if (out.n_qubits() != plan.n_qubits) {
        throw ConfigError("forward: state width mismatch");
    }
    out.reset_to_zero();
    for (const Gate &gate : plan.gates) {
        if (gate.binding.source == AngleBinding::Source::None) {
            out.apply(gate.kind, gate.control, gate.target, 0.0);
        } else {
            out.apply(gate.kind, gate.control, gate.target,
                      gate_angle(gate, params, s, plan.embedding));
        }
    }
}

qsim::StateVector forward(const CircuitPlan &plan, const ParameterStore &params,
                          std::span<const double> s) {
    qsim::StateVector state(plan.n_qubits);
    forward_into(plan, params, s, state);
    return state;
}

int count_parameters(const VqcConfig &actor, const VqcConfig &critic) {
    actor.validate();
    critic.validate();
    const int actor_circuit = 2 * actor.n_qubits() * actor.n_layers;
    const int critic_circuit = 2 * critic.n_qubits() * critic.n_layers;
    const int actor_w = 2 * actor.n_actions;
    const int critic_w = qpolicy::critic_weight_count(critic.readout, critic.n_qubits());
    return actor_circuit + actor_w + critic_circuit + critic_w;
}

} // namespace qppo::vqc
