// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qppo/errors.hpp"

namespace qppo::envs {

double wrap_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
    if (wrapped < 0.0) {
        wrapped += two_pi;
    }
    return wrapped - std::numbers::pi;
}

PendulumEnv::PendulumEnv() : rng_(0) {
    spec_.obs_dim = 3;
    spec_.act_dim = 1;
    spec_.obs_bounds = {{-1.0, 1.0}, {-1.0, 1.0}, {-kMaxSpeed, kMaxSpeed}};
    spec_.act_bounds = {{-kMaxTorque, kMaxTorque}};
    spec_.max_episode_steps = kMaxSteps;
}

std::vector<double> PendulumEnv::observation() const {
    return {std::cos(angle_), std::sin(angle_), velocity_};
}

std::vector<double> PendulumEnv::reset(std::optional<std::uint64_t> seed) {
    if (seed.has_value()) {
        rng_.seed(*seed);
    }
    std::uniform_real_distribution<double> angle_dist(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> velocity_dist(-1.0, 1.0);
    angle_ = angle_dist(rng_);
    velocity_ = velocity_dist(rng_);
    steps_ = 0;
    return observation();
}

std::vector<double> PendulumEnv::set_state(double angle, double angular_velocity) {
    angle_ = angle;
    velocity_ = std::clamp(angular_velocity, -kMaxSpeed, kMaxSpeed);
    steps_ = 0;
    return observation();
}

StepResult PendulumEnv::step(std::span<const double> action) {
    if (action.size() != 1) {
        throw ConfigError("PendulumEnv: action must be one-dimensional");
    }
    if (!std::isfinite(action[0])) {
        throw NumericError("PendulumEnv: non-finite torque");
    }
    const double torque = std::clamp(action[0], -kMaxTorque, kMaxTorque);

    // Cost is charged on the pre-step state, then explicit-Euler integration.
    const double angle_err = wrap_angle(angle_);
    const double cost =
        angle_err * angle_err + 0.1 * velocity_ * velocity_ + 0.001 * torque * torque;

    velocity_ += (3.0 * kGravity / (2.0 * kLength) * std::sin(angle_) +
                  3.0 / (kMass * kLength * kLength) * torque) *
                 kDt;
    velocity_ = std::clamp(velocity_, -kMaxSpeed, kMaxSpeed);
    angle_ += velocity_ * kDt;

    ++steps_;
    StepResult result;
    result.observation = observation();
    result.reward = -cost;
    result.terminated = false;
    result.truncated = steps_ >= kMaxSteps;
    return result;
}

} // namespace qppo::envs
