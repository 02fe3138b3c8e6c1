// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/gradients.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace qppo::diff {

namespace {

using qsim::GateKind;
using qsim::StateVector;
using vqc::AngleBinding;
using vqc::CircuitPlan;
using vqc::Gate;
using vqc::ParameterStore;

// bra <- diag(obs) * ket, where diag is the weighted parity sum.
void apply_diagonal(const WeightedZObservable &obs, const StateVector &ket, StateVector &bra) {
    const int n = ket.n_qubits();
    const auto src = ket.amplitudes();
    auto dst = bra.amplitudes();
    std::vector<std::uint64_t> masks(obs.terms.size());
    for (std::size_t t = 0; t < obs.terms.size(); ++t) {
        masks[t] = obs.terms[t].parity_mask(n);
    }
    for (std::size_t k = 0; k < src.size(); ++k) {
        double d = 0.0;
        for (std::size_t t = 0; t < masks.size(); ++t) {
            d += (std::popcount(k & masks[t]) & 1U) ? -obs.coefficients[t] : obs.coefficients[t];
        }
        dst[k] = d * src[k];
    }
}

// 2 Re <bra| (-i/2) G |ket> for the rotation generator G on `qubit`.
// RY: sum over strided pairs of Re(conj(b1) a0 - conj(b0) a1);
// RZ: sum over amplitudes of z_k Im(conj(b_k) a_k) with z the qubit parity.
double generator_overlap(GateKind kind, int qubit, const StateVector &bra,
                         const StateVector &ket) {
    const auto b = bra.amplitudes();
    const auto a = ket.amplitudes();
    const std::size_t stride = std::size_t{1} << bra.bit_position(qubit);
    double total = 0.0;
    if (kind == GateKind::RY) {
        for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                total += std::real(std::conj(b[i + stride]) * a[i]) -
                         std::real(std::conj(b[i]) * a[i + stride]);
            }
        }
    } else {
        for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                total += std::imag(std::conj(b[i]) * a[i]);
                total -= std::imag(std::conj(b[i + stride]) * a[i + stride]);
            }
        }
    }
    return total;
}

void unapply(StateVector &state, const Gate &gate, double angle) {
    if (qsim::is_rotation(gate.kind)) {
        state.apply(gate.kind, gate.control, gate.target, -angle);
    } else {
        state.apply(gate.kind, gate.control, gate.target, 0.0); // self-inverse
    }
}

} // namespace

AdjointEngine::AdjointEngine(int n_qubits) : ket_(n_qubits), bra_(n_qubits), final_(n_qubits) {}

void AdjointEngine::run_forward(const CircuitPlan &plan, const ParameterStore &params,
                                std::span<const double> s) {
    if (plan.n_qubits != final_.n_qubits()) {
        throw ConfigError("AdjointEngine: plan width does not match engine width");
    }
    angles_.assign(plan.gates.size(), 0.0);
    dlambda_chain_.assign(plan.gates.size(), 0.0);
    final_.reset_to_zero();
    for (std::size_t gi = 0; gi < plan.gates.size(); ++gi) {
        const Gate &gate = plan.gates[gi];
        if (gate.binding.source == AngleBinding::Source::None) {
            final_.apply(gate.kind, gate.control, gate.target, 0.0);
            continue;
        }
        const double angle = vqc::gate_angle(gate, params, s, plan.embedding);
        angles_[gi] = angle;
        if (gate.binding.source == AngleBinding::Source::Encoding) {
            dlambda_chain_[gi] = vqc::embed_angle_dlambda(
                s[static_cast<std::size_t>(gate.binding.feature)],
                params.lambda.value[static_cast<std::size_t>(gate.binding.lambda_slot)],
                plan.embedding);
        }
        final_.apply(gate.kind, gate.control, gate.target, angle);
    }
}

void AdjointEngine::run_backward(const CircuitPlan &plan, const WeightedZObservable &obs,
                                 double scale, std::span<double> d_theta,
                                 std::span<double> d_lambda, std::vector<double> *per_gate) {
    if (angles_.size() != plan.gates.size()) {
        throw ConfigError("AdjointEngine: run_backward without a matching run_forward");
    }
    if (d_theta.size() != static_cast<std::size_t>(plan.n_theta_slots) ||
        d_lambda.size() != static_cast<std::size_t>(plan.n_lambda_slots)) {
        throw ConfigError("AdjointEngine: gradient span sizes do not match plan slots");
    }
    if (per_gate != nullptr) {
        per_gate->clear();
    }

    std::copy(final_.amplitudes().begin(), final_.amplitudes().end(), ket_.amplitudes().begin());
    apply_diagonal(obs, final_, bra_);

    for (std::size_t gi = plan.gates.size(); gi-- > 0;) {
        const Gate &gate = plan.gates[gi];
        if (gate.binding.source != AngleBinding::Source::None) {
            const double partial = generator_overlap(gate.kind, gate.target, bra_, ket_);
            if (!std::isfinite(partial)) {
                throw NumericError("non-finite gradient at gate " + std::to_string(gi));
            }
            if (per_gate != nullptr) {
                per_gate->push_back(partial);
            }
            if (gate.binding.source == AngleBinding::Source::Variational) {
                d_theta[static_cast<std::size_t>(gate.binding.theta_slot)] += scale * partial;
            } else {
                d_lambda[static_cast<std::size_t>(gate.binding.lambda_slot)] +=
                    scale * partial * dlambda_chain_[gi];
            }
        }
        unapply(ket_, gate, angles_[gi]);
        unapply(bra_, gate, angles_[gi]);
    }
    if (per_gate != nullptr) {
        std::reverse(per_gate->begin(), per_gate->end());
    }
}

std::vector<GradientRecord> gradients(const CircuitPlan &plan, const ParameterStore &params,
                                      std::span<const double> s,
                                      std::span<const qsim::ZProductObservable> obs_list) {
    AdjointEngine engine(plan.n_qubits);
    engine.run_forward(plan, params, s);
    std::vector<GradientRecord> records;
    records.reserve(obs_list.size());
    for (std::size_t oi = 0; oi < obs_list.size(); ++oi) {
        GradientRecord rec;
        rec.observable_index = oi;
        rec.value = qsim::expectation(engine.state(), obs_list[oi]);
        rec.d_theta.assign(static_cast<std::size_t>(plan.n_theta_slots), 0.0);
        rec.d_lambda.assign(static_cast<std::size_t>(plan.n_lambda_slots), 0.0);
        WeightedZObservable single{{1.0}, {obs_list[oi]}};
        engine.run_backward(plan, single, 1.0, rec.d_theta, rec.d_lambda);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<double> gate_angle_gradients(const CircuitPlan &plan, const ParameterStore &params,
                                         std::span<const double> s,
                                         const qsim::ZProductObservable &obs) {
    AdjointEngine engine(plan.n_qubits);
    engine.run_forward(plan, params, s);
    std::vector<double> d_theta(static_cast<std::size_t>(plan.n_theta_slots), 0.0);
    std::vector<double> d_lambda(static_cast<std::size_t>(plan.n_lambda_slots), 0.0);
    std::vector<double> per_gate;
    WeightedZObservable single{{1.0}, {obs}};
    engine.run_backward(plan, single, 1.0, d_theta, d_lambda, &per_gate);
    return per_gate;
}

double parameter_shift(const CircuitPlan &plan, const ParameterStore &params,
                       std::span<const double> s, const qsim::ZProductObservable &obs,
                       std::size_t gate_index) {
    if (gate_index >= plan.gates.size() ||
        plan.gates[gate_index].binding.source == AngleBinding::Source::None) {
        throw ConfigError("parameter_shift: gate " + std::to_string(gate_index) +
                          " is not a rotation gate");
    }
    const auto eval_shifted = [&](double shift) {
        StateVector state(plan.n_qubits);
        for (std::size_t gi = 0; gi < plan.gates.size(); ++gi) {
            const Gate &gate = plan.gates[gi];
            if (gate.binding.source == AngleBinding::Source::None) {
                state.apply(gate.kind, gate.control, gate.target, 0.0);
            } else {
                double angle = vqc::gate_angle(gate, params, s, plan.embedding);
                if (gi == gate_index) {
                    angle += shift;
                }
                state.apply(gate.kind, gate.control, gate.target, angle);
            }
        }
        return qsim::expectation(state, obs);
    };
    constexpr double half_pi = std::numbers::pi / 2.0;
    return 0.5 * (eval_shifted(half_pi) - eval_shifted(-half_pi));
}

std::vector<SlotId> dead_parameter_scan(const CircuitPlan &plan,
                                        std::span<const qsim::ZProductObservable> obs_list,
                                        int trials, double tol, std::uint64_t seed) {
    if (trials < 10) {
        throw ConfigError("dead_parameter_scan: trials must be >= 10");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> theta_dist(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> lambda_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> feature_dist(-std::numbers::pi / 2.0,
                                                        std::numbers::pi / 2.0);

    const auto n_lambda = static_cast<std::size_t>(plan.n_lambda_slots);
    const auto n_theta = static_cast<std::size_t>(plan.n_theta_slots);
    std::vector<bool> lambda_dead(n_lambda, true);
    std::vector<bool> theta_dead(n_theta, true);

    ParameterStore params;
    params.lambda.resize(n_lambda, 1.0);
    params.theta.resize(n_theta, 0.0);
    std::vector<double> features(static_cast<std::size_t>(plan.n_features));
    std::vector<double> d_theta(n_theta);
    std::vector<double> d_lambda(n_lambda);

    AdjointEngine engine(plan.n_qubits);
    for (int trial = 0; trial < trials; ++trial) {
        for (auto &v : params.lambda.value) {
            v = lambda_dist(rng);
        }
        for (auto &v : params.theta.value) {
            v = theta_dist(rng);
        }
        for (auto &f : features) {
            f = feature_dist(rng);
        }
        engine.run_forward(plan, params, features);
        for (const auto &obs : obs_list) {
            std::fill(d_theta.begin(), d_theta.end(), 0.0);
            std::fill(d_lambda.begin(), d_lambda.end(), 0.0);
            WeightedZObservable single{{1.0}, {obs}};
            engine.run_backward(plan, single, 1.0, d_theta, d_lambda);
            for (std::size_t i = 0; i < n_theta; ++i) {
                if (std::abs(d_theta[i]) >= tol) {
                    theta_dead[i] = false;
                }
            }
            for (std::size_t i = 0; i < n_lambda; ++i) {
                if (std::abs(d_lambda[i]) >= tol) {
                    lambda_dead[i] = false;
                }
            }
        }
    }

    std::vector<SlotId> dead;
    for (std::size_t i = 0; i < n_lambda; ++i) {
        if (lambda_dead[i]) {
            dead.push_back({SlotId::Group::Lambda, static_cast<int>(i)});
        }
    }
    for (std::size_t i = 0; i < n_theta; ++i) {
        if (theta_dead[i]) {
            dead.push_back({SlotId::Group::Theta, static_cast<int>(i)});
        }
    }
    return dead;
}

VarianceStats variance_scan(const vqc::VqcConfig &config, const qsim::ZProductObservable &obs,
                            int samples, std::uint64_t seed) {
    if (samples < 100) {
        throw ConfigError("variance_scan: samples must be >= 100");
    }
    const CircuitPlan plan = vqc::build_plan(config);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> theta_dist(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> feature_dist(-std::numbers::pi / 2.0,
                                                        std::numbers::pi / 2.0);

    ParameterStore params;
    params.lambda.resize(static_cast<std::size_t>(plan.n_lambda_slots), 1.0);
    params.theta.resize(static_cast<std::size_t>(plan.n_theta_slots), 0.0);
    std::vector<double> features(static_cast<std::size_t>(plan.n_features));
    qsim::StateVector state(plan.n_qubits);

    // Welford accumulation.
    double mean = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        for (auto &t : params.theta.value) {
            t = theta_dist(rng);
        }
        for (auto &f : features) {
            f = feature_dist(rng);
        }
        vqc::forward_into(plan, params, features, state);
        const double x = qsim::expectation(state, obs);
        const double delta = x - mean;
        mean += delta / (i + 1);
        m2 += delta * (x - mean);
    }
    return {mean, m2 / (samples - 1), samples};
}

} // namespace qppo::diff
