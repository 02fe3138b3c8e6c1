// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "qppo/env.hpp"

namespace qppo::envs {

/**
 * Torque-limited pendulum swing-up with the standard classic-control
 * constants (g=10, m=1, l=1, dt=0.05). Angle 0 is upright; the observation
 * is (cos angle, sin angle, angular velocity); reward is the negative
 * quadratic penalty -(wrap(angle)^2 + 0.1 w^2 + 0.001 u^2), always <= 0.
 * Episodes end by time limit only (200 steps, flagged as truncation).
 */
class PendulumEnv final : public Environment {
  public:
    static constexpr double kGravity = 10.0;
    static constexpr double kMass = 1.0;
    static constexpr double kLength = 1.0;
    static constexpr double kDt = 0.05;
    static constexpr double kMaxSpeed = 8.0;
    static constexpr double kMaxTorque = 2.0;
    static constexpr int kMaxSteps = 200;

    PendulumEnv();

    const EnvSpec &spec() const override { return spec_; }
    std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt) override;
    StepResult step(std::span<const double> action) override;

    /// Deterministic reset to a chosen state (step counter cleared).
    std::vector<double> set_state(double angle, double angular_velocity);

    double angle() const { return angle_; }
    double angular_velocity() const { return velocity_; }

  private:
    std::vector<double> observation() const;

    EnvSpec spec_;
    std::mt19937_64 rng_;
    double angle_ = 0.0;
    double velocity_ = 0.0;
    int steps_ = 0;
};

/// Wraps an angle into [-pi, pi].
double wrap_angle(double angle);

} // namespace qppo::envs
