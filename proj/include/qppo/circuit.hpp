// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "qppo/params.hpp"
#include "qppo/readout.hpp"
#include "qppo/statevector.hpp"

namespace qppo::vqc {

/// How a classical feature value becomes a rotation angle. NORM_* variants
/// expect features already normalized into [-pi/2, pi/2]; RAW_* variants take
/// the environment observation as-is.
enum class EmbeddingMode { RawArctan, RawSigmoid, NormIdentity, NormArctan, NormSigmoid };

enum class EntanglerKind { CnotChain, CzChain };

std::string to_string(EmbeddingMode mode);
EmbeddingMode embedding_from_string(const std::string &name);
std::string to_string(EntanglerKind kind);
EntanglerKind entangler_from_string(const std::string &name);

inline bool is_normalized_mode(EmbeddingMode mode) {
    return mode == EmbeddingMode::NormIdentity || mode == EmbeddingMode::NormArctan ||
           mode == EmbeddingMode::NormSigmoid;
}

/// Per-feature interval used for clipping and normalization.
struct FeatureBounds {
    double low = 0.0;
    double high = 0.0;
};

struct VqcConfig {
    int n_features = 0;
    int stack_factor = 1; // how many times each feature is encoded per layer
    int n_layers = 1;
    EmbeddingMode embedding = EmbeddingMode::NormIdentity;
    EntanglerKind entangler = EntanglerKind::CnotChain;
    ReadoutId readout = ReadoutId::M1;
    int n_actions = 1; // actor only

    int n_qubits() const { return n_features * stack_factor; }
    void validate() const;
};

/// Where a rotation gate takes its angle from.
struct AngleBinding {
    enum class Source { None, Encoding, Variational };
    Source source = Source::None;
    int feature = -1;     // Encoding: feature index
    int lambda_slot = -1; // Encoding: input-scaling slot
    int theta_slot = -1;  // Variational: variational slot
};

struct Gate {
    qsim::GateKind kind = qsim::GateKind::RY;
    int target = -1;
    int control = -1; // two-qubit kinds only
    AngleBinding binding;
};

/**
 * Ordered gate list of a circuit together with its angle bindings.
 *
 * For the standard layered circuit every layer holds, in order: the encoding
 * block (RY then RZ per qubit, both bound to the same feature and the same
 * lambda slot), the variational block (one RY per qubit) and the entangling
 * chain (q, q+1). Slot (layer l, qubit q) has index l*n_qubits + q in both
 * slot groups. Plans are immutable after construction and freely shareable.
 */
struct CircuitPlan {
    int n_qubits = 0;
    int n_features = 0;
    EmbeddingMode embedding = EmbeddingMode::NormIdentity;
    std::vector<Gate> gates;
    int n_lambda_slots = 0;
    int n_theta_slots = 0;
};

/**
 * The three trainable groups of one circuit: input scalings (lambda),
 * variational angles (theta) and output scalings (w). Group sizes must match
 * the plan's slot counts and the readout's weight count.
 */
struct ParameterStore {
    ParamGroup lambda;
    ParamGroup theta;
    ParamGroup w;

    std::size_t total_count() const { return lambda.size() + theta.size() + w.size(); }
    void zero_grads() {
        lambda.zero_grad();
        theta.zero_grad();
        w.zero_grad();
    }
};

/// Store sized for `plan` with `n_weights` output scalings. lambda and w
/// start at 1, theta at N(0, theta_std) draws from `rng`.
ParameterStore init_parameters(const CircuitPlan &plan, int n_weights, std::mt19937_64 &rng,
                               double theta_std = 0.1);

/**
 * Linear map of each feature onto [-pi/2, pi/2]: values are clipped to their
 * bounds, shifted by the midpoint and scaled by pi/(high-low).
 */
std::vector<double> normalize_features(std::span<const double> s,
                                       std::span<const FeatureBounds> bounds);

/// Rotation angle for one feature/scaling pair under an embedding mode.
double embed_angle(double feature, double lambda, EmbeddingMode mode);

/// d(angle)/d(lambda) for the same map; the chain factor used by gradients.
double embed_angle_dlambda(double feature, double lambda, EmbeddingMode mode);

/// The layered circuit of `config`: qubit q encodes feature (q mod n_features)
/// in every layer. Gate count is n_layers * (4*n_qubits - 1).
CircuitPlan build_plan(const VqcConfig &config);

/// Angle of `gate` given the parameters and the observation.
double gate_angle(const Gate &gate, const ParameterStore &params, std::span<const double> s,
                  EmbeddingMode mode);

/// Runs the circuit on |0...0>, writing the final state into `out` (which
/// must match the plan's width). Pure in (plan, params, s).
void forward_into(const CircuitPlan &plan, const ParameterStore &params,
                  std::span<const double> s, qsim::StateVector &out);

qsim::StateVector forward(const CircuitPlan &plan, const ParameterStore &params,
                          std::span<const double> s);

/// Trainable-parameter total of an actor/critic pair:
/// 2*n_qubits*n_layers per circuit plus 2*n_actions actor weights and the
/// readout-dependent critic weight count.
int count_parameters(const VqcConfig &actor, const VqcConfig &critic);

} // namespace qppo::vqc
