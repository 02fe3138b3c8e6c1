// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/readout.hpp"

#include <array>

namespace qppo {

std::string to_string(ReadoutId id) {
    return "M" + std::to_string(static_cast<int>(id) + 1);
}

ReadoutId readout_from_string(const std::string &name) {
    for (int i = 0; i < 9; ++i) {
        if (name == "M" + std::to_string(i + 1)) {
            return static_cast<ReadoutId>(i);
        }
    }
    throw ConfigError("unknown readout id '" + name + "' (expected M1..M9)");
}

namespace qpolicy {
namespace {

// Width of the actor mu observable per readout row: 1 for M1-M3, 2 for
// M4-M6, 3 for M7-M9.
int mu_span(ReadoutId id) { return static_cast<int>(id) / 3 + 1; }

qsim::ZProductObservable wrapped_product(int first, int count, int n_qubits,
                                         const std::string &what) {
    std::vector<int> qubits;
    qubits.reserve(count);
    for (int k = 0; k < count; ++k) {
        qubits.push_back((first + k) % n_qubits);
    }
    try {
        return qsim::ZProductObservable(std::move(qubits));
    } catch (const ConfigError &) {
        throw ConfigError(what + ": duplicate qubit after modular wrap on " +
                          std::to_string(n_qubits) + " qubits");
    }
}

} // namespace

CriticReadoutKind critic_readout_kind(ReadoutId id) {
    switch (static_cast<int>(id) % 3) {
    case 0:
        return CriticReadoutKind::SumPerQubit;
    case 1:
        return CriticReadoutKind::SingleQubit;
    default:
        return CriticReadoutKind::FullProduct;
    }
}

int critic_weight_count(ReadoutId id, int n_qubits) {
    return critic_readout_kind(id) == CriticReadoutKind::SumPerQubit ? n_qubits : 1;
}

ReadoutConfig build_readout(ReadoutId id, int n_qubits, int n_actions) {
    if (n_qubits < 1) {
        throw ConfigError("build_readout: n_qubits must be positive");
    }
    if (n_actions < 1) {
        throw ConfigError("build_readout: n_actions must be positive");
    }
    ReadoutConfig cfg;
    cfg.id = id;
    cfg.n_qubits = n_qubits;
    cfg.n_actions = n_actions;

    const int span = mu_span(id);
    for (int i = 0; i < n_actions; ++i) {
        // M1-M3: mu Z_i, sigma Z_{i+1}; M4-M6: mu Z_i Z_{i+1}, sigma Z_{i+2};
        // M7-M9: mu Z_i..Z_{i+2}, sigma Z_{i+3}..Z_{i+5}. Always mod n.
        const int sigma_span = (span == 2) ? 1 : span;
        cfg.mu_obs.push_back(wrapped_product(i, span, n_qubits, "O_mu"));
        cfg.sigma_obs.push_back(wrapped_product(i + span, sigma_span, n_qubits, "O_sigma"));
    }

    switch (critic_readout_kind(id)) {
    case CriticReadoutKind::SumPerQubit:
        for (int j = 0; j < n_qubits; ++j) {
            cfg.value_obs.emplace_back(std::vector<int>{j});
        }
        break;
    case CriticReadoutKind::SingleQubit:
        cfg.value_obs.emplace_back(std::vector<int>{0});
        break;
    case CriticReadoutKind::FullProduct: {
        std::vector<int> all(n_qubits);
        for (int j = 0; j < n_qubits; ++j) {
            all[j] = j;
        }
        cfg.value_obs.emplace_back(std::move(all));
        break;
    }
    }
    return cfg;
}

} // namespace qpolicy
} // namespace qppo
