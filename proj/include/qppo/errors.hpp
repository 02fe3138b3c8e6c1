// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qppo {

/// Thrown when a circuit, readout or experiment description is inconsistent
/// (bad qubit index, mismatched sizes, unknown config key, ...).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

/// Thrown when a numeric quantity that must be finite is not (NaN angle,
/// diverged loss, ...).
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace qppo
