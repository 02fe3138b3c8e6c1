// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qppo/circuit.hpp"
#include "qppo/statevector.hpp"

namespace qppo::diff {

/// Exact expectation and its partials with respect to every variational and
/// input-scaling slot of one observable.
struct GradientRecord {
    double value = 0.0;
    std::vector<double> d_theta;
    std::vector<double> d_lambda;
    std::size_t observable_index = 0;
};

/// Weighted sum of Z products; still diagonal in the computational basis.
/// Used to push loss partials through a readout in a single backward sweep.
struct WeightedZObservable {
    std::vector<double> coefficients;
    std::vector<qsim::ZProductObservable> terms;
};

/**
 * Reverse-accumulation engine for expectation gradients.
 *
 * run_forward() simulates the circuit once and caches per-gate angles plus
 * the embedding chain factors; run_backward() then walks the gate list once
 * in reverse (un-applying each unitary from both the state and the
 * observable-adjoint vector) and accumulates d<O>/d(slot) for every slot.
 * Cost is a small constant multiple of one forward pass, independent of the
 * parameter count.
 *
 * Buffers are reused across calls; an engine is not safe for concurrent use.
 */
class AdjointEngine {
  public:
    explicit AdjointEngine(int n_qubits);

    /// Simulate and cache. The final state stays valid until the next call.
    void run_forward(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                     std::span<const double> s);

    const qsim::StateVector &state() const { return final_; }

    /**
     * Accumulate scale * d<O>/d(slot) into the gradient spans (sized like the
     * plan's slot groups). Requires a preceding run_forward for the same plan.
     * When `per_gate` is non-null it receives the raw per-rotation-gate angle
     * partials in plan order (unscaled).
     */
    void run_backward(const vqc::CircuitPlan &plan, const WeightedZObservable &obs, double scale,
                      std::span<double> d_theta, std::span<double> d_lambda,
                      std::vector<double> *per_gate = nullptr);

  private:
    qsim::StateVector ket_;
    qsim::StateVector bra_;
    qsim::StateVector final_;
    std::vector<double> angles_;        // per gate (0 for two-qubit gates)
    std::vector<double> dlambda_chain_; // per gate (encoding gates only)
};

/// d<O>/d(theta slot) and d<O>/d(lambda slot) for every observable. The
/// shared lambda slot of an RY/RZ encoding pair receives both contributions.
std::vector<GradientRecord> gradients(const vqc::CircuitPlan &plan,
                                      const vqc::ParameterStore &params, std::span<const double> s,
                                      std::span<const qsim::ZProductObservable> obs_list);

/// Raw d<O>/d(angle) per rotation gate, in plan order.
std::vector<double> gate_angle_gradients(const vqc::CircuitPlan &plan,
                                         const vqc::ParameterStore &params,
                                         std::span<const double> s,
                                         const qsim::ZProductObservable &obs);

/**
 * Two-point shift rule for the angle of one rotation gate:
 * (<O>(angle + pi/2) - <O>(angle - pi/2)) / 2. `gate_index` must refer to a
 * rotation gate of the plan. Exact for the RY/RZ generators; used as a
 * cross-check of the analytic path.
 */
double parameter_shift(const vqc::CircuitPlan &plan, const vqc::ParameterStore &params,
                       std::span<const double> s, const qsim::ZProductObservable &obs,
                       std::size_t gate_index);

/// Identifies one trainable slot of a circuit.
struct SlotId {
    enum class Group { Lambda, Theta };
    Group group = Group::Lambda;
    int index = 0;

    auto operator<=>(const SlotId &) const = default;
};

/**
 * Slots whose gradient stays below `tol` for every listed observable at every
 * one of `trials` random parameter/feature draws (theta ~ U[-pi,pi], lambda ~
 * U[-2,2], features ~ U[-pi/2,pi/2]). Deterministic under a fixed seed.
 */
std::vector<SlotId> dead_parameter_scan(const vqc::CircuitPlan &plan,
                                        std::span<const qsim::ZProductObservable> obs_list,
                                        int trials, double tol,
                                        std::uint64_t seed = 0x51c2f00dULL);

struct VarianceStats {
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
    int samples = 0;
};

/**
 * Sample statistics of <O> under random circuits of `config`: theta uniform
 * in [-pi, pi], features uniform in [-pi/2, pi/2], all lambda fixed at 1.
 */
VarianceStats variance_scan(const vqc::VqcConfig &config, const qsim::ZProductObservable &obs,
                            int samples, std::uint64_t seed);

} // namespace qppo::diff
