// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "qppo/circuit.hpp"
#include "qppo/mlp.hpp"
#include "qppo/policy.hpp"

namespace qppo::checkpoint {

/// CircuitPlan <-> JSON. Gate kinds and bindings are spelled out; parameter
/// values serialize with shortest round-trip precision, so parse(serialize(x))
/// reproduces every double bit-exactly.
nlohmann::json plan_to_json(const vqc::CircuitPlan &plan);
vqc::CircuitPlan plan_from_json(const nlohmann::json &j);

nlohmann::json params_to_json(const vqc::ParameterStore &params);
vqc::ParameterStore params_from_json(const nlohmann::json &j);

/// Full agent snapshot (plans + parameter groups for both heads).
nlohmann::json quantum_agent_to_json(const qpolicy::QuantumActorCritic &agent);
void load_quantum_agent(qpolicy::QuantumActorCritic &agent, const nlohmann::json &j);

nlohmann::json mlp_agent_to_json(qpolicy::MlpActorCritic &agent);
void load_mlp_agent(qpolicy::MlpActorCritic &agent, const nlohmann::json &j);

} // namespace qppo::checkpoint
