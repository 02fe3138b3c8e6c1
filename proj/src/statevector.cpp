// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qppo::qsim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("StateVector: n_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

void StateVector::reset_to_zero() {
    std::fill(amps_.begin(), amps_.end(), std::complex<double>{0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

double StateVector::squared_norm() const {
    double total = 0.0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw ConfigError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(n_qubits_) + " qubits");
    }
}

void StateVector::apply_ry(int qubit, double angle) {
    check_qubit(qubit);
    if (!std::isfinite(angle)) {
        throw NumericError("apply_ry: non-finite angle");
    }
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t stride = std::size_t{1} << bit_position(qubit);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const std::complex<double> a0 = amps_[i];
            const std::complex<double> a1 = amps_[i + stride];
            amps_[i] = c * a0 - s * a1;
            amps_[i + stride] = s * a0 + c * a1;
        }
    }
}

void StateVector::apply_rz(int qubit, double angle) {
    check_qubit(qubit);
    if (!std::isfinite(angle)) {
        throw NumericError("apply_rz: non-finite angle");
    }
    const std::complex<double> e0{std::cos(0.5 * angle), -std::sin(0.5 * angle)};
    const std::complex<double> e1 = std::conj(e0);
    const std::size_t stride = std::size_t{1} << bit_position(qubit);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            amps_[i] *= e0;
            amps_[i + stride] *= e1;
        }
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw ConfigError("apply_cnot: control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << bit_position(control);
    const std::size_t tstride = std::size_t{1} << bit_position(target);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * tstride) {
        for (std::size_t i = base; i < base + tstride; ++i) {
            if (i & cmask) {
                std::swap(amps_[i], amps_[i + tstride]);
            }
        }
    }
}

void StateVector::apply_cz(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw ConfigError("apply_cz: control and target must differ");
    }
    const std::size_t mask = (std::size_t{1} << bit_position(control)) |
                             (std::size_t{1} << bit_position(target));
    const std::size_t dim = amps_.size();
    for (std::size_t k = 0; k < dim; ++k) {
        if ((k & mask) == mask) {
            amps_[k] = -amps_[k];
        }
    }
}

void StateVector::apply(GateKind kind, int control, int target, double angle) {
    switch (kind) {
    case GateKind::RY:
        apply_ry(target, angle);
        return;
    case GateKind::RZ:
        apply_rz(target, angle);
        return;
    case GateKind::CNOT:
        apply_cnot(control, target);
        return;
    case GateKind::CZ:
        apply_cz(control, target);
        return;
    }
    throw ConfigError("apply: unknown gate kind");
}

StateVector init_state(int n_qubits) { return StateVector(n_qubits); }

void apply_rotation(StateVector &state, GateKind kind, int qubit, double angle) {
    if (kind == GateKind::RY) {
        state.apply_ry(qubit, angle);
    } else if (kind == GateKind::RZ) {
        state.apply_rz(qubit, angle);
    } else {
        throw ConfigError("apply_rotation: kind must be RY or RZ");
    }
}

void apply_two_qubit(StateVector &state, GateKind kind, int control, int target) {
    if (kind == GateKind::CNOT) {
        state.apply_cnot(control, target);
    } else if (kind == GateKind::CZ) {
        state.apply_cz(control, target);
    } else {
        throw ConfigError("apply_two_qubit: kind must be CNOT or CZ");
    }
}

ZProductObservable::ZProductObservable(std::vector<int> qubits) : qubits_(std::move(qubits)) {
    if (qubits_.empty()) {
        throw ConfigError("ZProductObservable: qubit set must be non-empty");
    }
    std::sort(qubits_.begin(), qubits_.end());
    if (std::adjacent_find(qubits_.begin(), qubits_.end()) != qubits_.end()) {
        throw ConfigError("ZProductObservable: duplicate qubit in product");
    }
    if (qubits_.front() < 0) {
        throw ConfigError("ZProductObservable: negative qubit index");
    }
}

std::uint64_t ZProductObservable::parity_mask(int n_qubits) const {
    if (qubits_.back() >= n_qubits) {
        throw ConfigError("ZProductObservable: qubit " + std::to_string(qubits_.back()) +
                          " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    std::uint64_t mask = 0;
    for (int q : qubits_) {
        mask |= std::uint64_t{1} << (n_qubits - 1 - q);
    }
    return mask;
}

double expectation(const StateVector &state, const ZProductObservable &obs) {
    const std::uint64_t mask = obs.parity_mask(state.n_qubits());
    const auto amps = state.amplitudes();
    double value = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double p = std::norm(amps[k]);
        value += (std::popcount(k & mask) & 1U) ? -p : p;
    }
    return value;
}

} // namespace qppo::qsim
