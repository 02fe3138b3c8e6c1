// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/checkpoint.hpp"

namespace qppo::checkpoint {

using nlohmann::json;

namespace {

std::string gate_kind_name(qsim::GateKind kind) {
    switch (kind) {
    case qsim::GateKind::RY:
        return "ry";
    case qsim::GateKind::RZ:
        return "rz";
    case qsim::GateKind::CNOT:
        return "cnot";
    case qsim::GateKind::CZ:
        return "cz";
    }
    return "?";
}

qsim::GateKind gate_kind_from(const std::string &name) {
    if (name == "ry") {
        return qsim::GateKind::RY;
    }
    if (name == "rz") {
        return qsim::GateKind::RZ;
    }
    if (name == "cnot") {
        return qsim::GateKind::CNOT;
    }
    if (name == "cz") {
        return qsim::GateKind::CZ;
    }
    throw ConfigError("checkpoint: unknown gate kind '" + name + "'");
}

} // namespace

json plan_to_json(const vqc::CircuitPlan &plan) {
    json gates = json::array();
    for (const auto &gate : plan.gates) {
        json g;
        g["kind"] = gate_kind_name(gate.kind);
        g["target"] = gate.target;
        if (gate.control >= 0) {
            g["control"] = gate.control;
        }
        switch (gate.binding.source) {
        case vqc::AngleBinding::Source::Encoding:
            g["feature"] = gate.binding.feature;
            g["lambda_slot"] = gate.binding.lambda_slot;
            break;
        case vqc::AngleBinding::Source::Variational:
            g["theta_slot"] = gate.binding.theta_slot;
            break;
        case vqc::AngleBinding::Source::None:
            break;
        }
        gates.push_back(std::move(g));
    }
    return json{{"n_qubits", plan.n_qubits},
                {"n_features", plan.n_features},
                {"embedding", vqc::to_string(plan.embedding)},
                {"n_lambda_slots", plan.n_lambda_slots},
                {"n_theta_slots", plan.n_theta_slots},
                {"gates", std::move(gates)}};
}

vqc::CircuitPlan plan_from_json(const json &j) {
    vqc::CircuitPlan plan;
    plan.n_qubits = j.at("n_qubits").get<int>();
    plan.n_features = j.at("n_features").get<int>();
    plan.embedding = vqc::embedding_from_string(j.at("embedding").get<std::string>());
    plan.n_lambda_slots = j.at("n_lambda_slots").get<int>();
    plan.n_theta_slots = j.at("n_theta_slots").get<int>();
    for (const auto &g : j.at("gates")) {
        vqc::Gate gate;
        gate.kind = gate_kind_from(g.at("kind").get<std::string>());
        gate.target = g.at("target").get<int>();
        gate.control = g.value("control", -1);
        if (g.contains("lambda_slot")) {
            gate.binding.source = vqc::AngleBinding::Source::Encoding;
            gate.binding.feature = g.at("feature").get<int>();
            gate.binding.lambda_slot = g.at("lambda_slot").get<int>();
        } else if (g.contains("theta_slot")) {
            gate.binding.source = vqc::AngleBinding::Source::Variational;
            gate.binding.theta_slot = g.at("theta_slot").get<int>();
        }
        plan.gates.push_back(gate);
    }
    return plan;
}

json params_to_json(const vqc::ParameterStore &params) {
    return json{{"lambda", params.lambda.value},
                {"theta", params.theta.value},
                {"w", params.w.value}};
}

vqc::ParameterStore params_from_json(const json &j) {
    vqc::ParameterStore params;
    params.lambda.resize(j.at("lambda").size(), 0.0);
    params.theta.resize(j.at("theta").size(), 0.0);
    params.w.resize(j.at("w").size(), 0.0);
    params.lambda.value = j.at("lambda").get<std::vector<double>>();
    params.theta.value = j.at("theta").get<std::vector<double>>();
    params.w.value = j.at("w").get<std::vector<double>>();
    return params;
}

json quantum_agent_to_json(const qpolicy::QuantumActorCritic &agent) {
    return json{{"kind", "quantum"},
                {"actor", {{"plan", plan_to_json(agent.actor_plan())},
                           {"params", params_to_json(agent.actor_params())}}},
                {"critic", {{"plan", plan_to_json(agent.critic_plan())},
                            {"params", params_to_json(agent.critic_params())}}}};
}

namespace {

void load_store(vqc::ParameterStore &dst, const json &j) {
    const vqc::ParameterStore loaded = params_from_json(j);
    if (loaded.lambda.size() != dst.lambda.size() || loaded.theta.size() != dst.theta.size() ||
        loaded.w.size() != dst.w.size()) {
        throw ConfigError("checkpoint: parameter group sizes do not match the agent");
    }
    dst.lambda.value = loaded.lambda.value;
    dst.theta.value = loaded.theta.value;
    dst.w.value = loaded.w.value;
}

} // namespace

void load_quantum_agent(qpolicy::QuantumActorCritic &agent, const json &j) {
    if (j.at("kind").get<std::string>() != "quantum") {
        throw ConfigError("checkpoint: not a quantum agent snapshot");
    }
    load_store(agent.actor_params(), j.at("actor").at("params"));
    load_store(agent.critic_params(), j.at("critic").at("params"));
}

json mlp_agent_to_json(qpolicy::MlpActorCritic &agent) {
    return json{{"kind", "classical-mlp"},
                {"hidden", agent.hidden()},
                {"actor", agent.actor_group().value},
                {"critic", agent.critic_group().value}};
}

void load_mlp_agent(qpolicy::MlpActorCritic &agent, const json &j) {
    if (j.at("kind").get<std::string>() != "classical-mlp") {
        throw ConfigError("checkpoint: not an mlp agent snapshot");
    }
    const auto actor = j.at("actor").get<std::vector<double>>();
    const auto critic = j.at("critic").get<std::vector<double>>();
    if (actor.size() != agent.actor_group().size() || critic.size() != agent.critic_group().size()) {
        throw ConfigError("checkpoint: parameter sizes do not match the agent");
    }
    agent.actor_group().value = actor;
    agent.critic_group().value = critic;
}

} // namespace qppo::checkpoint
