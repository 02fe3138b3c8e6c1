// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qppo/statevector.hpp"

namespace qppo {

/// The nine readout configurations: which Z-product observables feed the
/// policy mean, the policy standard deviation and the state value.
enum class ReadoutId { M1, M2, M3, M4, M5, M6, M7, M8, M9 };

std::string to_string(ReadoutId id);
ReadoutId readout_from_string(const std::string &name);

namespace qpolicy {

/// Shape of the critic postprocessing for a readout column.
enum class CriticReadoutKind {
    SumPerQubit, // sum of single-qubit Z terms, one weight per qubit
    SingleQubit, // Z on qubit 0, one weight
    FullProduct  // Z product over all qubits, one weight
};

CriticReadoutKind critic_readout_kind(ReadoutId id);

/// Number of critic output-scaling weights for a readout on n qubits.
int critic_weight_count(ReadoutId id, int n_qubits);

/**
 * Observable assignment for one readout configuration.
 *
 * Actor weights are laid out as [w_mu_0..w_mu_{A-1}, w_sigma_0..w_sigma_{A-1}];
 * critic weights follow the order of `value_obs`.
 */
struct ReadoutConfig {
    ReadoutId id = ReadoutId::M1;
    int n_qubits = 0;
    int n_actions = 0;
    std::vector<qsim::ZProductObservable> mu_obs;    // one per action
    std::vector<qsim::ZProductObservable> sigma_obs; // one per action
    std::vector<qsim::ZProductObservable> value_obs; // n (sum form) or 1

    int actor_weight_count() const { return 2 * n_actions; }
    int critic_weight_count() const { return static_cast<int>(value_obs.size()); }
};

/**
 * Builds the observables of a readout configuration. All indices are taken
 * modulo n_qubits; a duplicate qubit inside one product after the wrap is a
 * configuration error.
 */
ReadoutConfig build_readout(ReadoutId id, int n_qubits, int n_actions);

} // namespace qpolicy
} // namespace qppo
