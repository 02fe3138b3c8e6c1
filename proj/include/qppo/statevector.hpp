// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qppo/errors.hpp"

namespace qppo::qsim {

/// Hard cap on register width; everything here is desk-scale exact simulation.
inline constexpr int kMaxQubits = 14;

enum class GateKind { RY, RZ, CNOT, CZ };

inline bool is_rotation(GateKind k) { return k == GateKind::RY || k == GateKind::RZ; }

/**
 * Dense statevector of an n-qubit register.
 *
 * Amplitude ordering: basis index k carries qubit 0 as the MOST significant
 * bit, so for n qubits the bit position of qubit q inside k is (n - 1 - q).
 * |10> on two qubits (qubit 0 set) is therefore index 2.
 *
 * Gates mutate the amplitudes in place over strided index pairs; no unitary
 * matrices are ever materialized. Not safe for concurrent mutation; distinct
 * instances are independent.
 */
class StateVector {
  public:
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const std::complex<double>> amplitudes() const { return amps_; }
    std::span<std::complex<double>> amplitudes() { return amps_; }

    /// Back to |0...0>.
    void reset_to_zero();

    double squared_norm() const;

    /// Bit position of `qubit` inside a basis index (MSB-first convention).
    int bit_position(int qubit) const { return n_qubits_ - 1 - qubit; }

    void apply_ry(int qubit, double angle);
    void apply_rz(int qubit, double angle);
    void apply_cnot(int control, int target);
    void apply_cz(int control, int target);

    /// Dispatch on kind; `angle` ignored for two-qubit kinds, `control` for rotations.
    void apply(GateKind kind, int control, int target, double angle);

  private:
    void check_qubit(int qubit) const;

    int n_qubits_;
    std::vector<std::complex<double>> amps_;
};

/// Fresh register in the basis state |0...0>.
StateVector init_state(int n_qubits);

/// Standard single-qubit rotation (kind must be RY or RZ). Norm preserving.
void apply_rotation(StateVector &state, GateKind kind, int qubit, double angle);

/// Controlled-X / controlled-Z (kind must be CNOT or CZ). CZ is symmetric in
/// its two wires.
void apply_two_qubit(StateVector &state, GateKind kind, int control, int target);

/**
 * Tensor product of Pauli-Z operators on a set of distinct qubits.
 * Diagonal in the computational basis; expectation is a parity-weighted
 * probability sum and always lies in [-1, 1].
 */
class ZProductObservable {
  public:
    explicit ZProductObservable(std::vector<int> qubits);

    const std::vector<int> &qubits() const { return qubits_; }

    /// OR of the qubit bit masks for an n-qubit register.
    std::uint64_t parity_mask(int n_qubits) const;

  private:
    std::vector<int> qubits_; // sorted, distinct, non-empty
};

/// <psi| Z_{q1} Z_{q2} ... |psi>.
double expectation(const StateVector &state, const ZProductObservable &obs);

} // namespace qppo::qsim
