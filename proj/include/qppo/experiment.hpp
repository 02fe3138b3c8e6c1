// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qppo/agent.hpp"
#include "qppo/circuit.hpp"
#include "qppo/env.hpp"
#include "qppo/gradients.hpp"
#include "qppo/train.hpp"

namespace qppo::harness {

enum class AgentKind { Quantum, ClassicalMlp };

struct EnvConfig {
    std::string name = "pendulum";
    std::optional<bool> normalize;            // default: quantum NORM_* embeddings -> true
    std::optional<std::vector<int>> feature_select;
};

/**
 * Complete description of one experiment: agent, environment wrappers,
 * training hyperparameters and the seed list. Every run derived from a config
 * is deterministic per seed. Unknown JSON keys are hard errors.
 */
struct ExperimentConfig {
    std::string name = "experiment";
    AgentKind agent = AgentKind::Quantum;
    EnvConfig env;
    vqc::VqcConfig vqc;                 // quantum agents
    std::vector<int> mlp_hidden = {64, 64}; // classical agents
    ppo::TrainConfig train;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string output_dir = "runs/experiment";
    double solved_threshold = -200.0; // community convention for the pendulum task

    bool normalize_observations() const;

    static ExperimentConfig from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
    static ExperimentConfig load_file(const std::filesystem::path &path);
    void validate() const;
};

/// Per-iteration training log row. The CSV serialization carries exactly
/// (iteration, env_steps, mean_episode_reward, std_episode_reward, per-group lr).
struct TrainingRecord {
    int iteration = 0;
    std::int64_t env_steps = 0;
    double mean_episode_reward = 0.0;
    double std_episode_reward = 0.0;
    int episode_count = 0;
    double lr_variational = 0.0;
    double lr_input_scaling = 0.0;
    double lr_output_scaling = 0.0;
    double wall_seconds = 0.0;
};

/// Owning chain of environment plus optional wrappers; `top` is the view the
/// agent interacts with.
struct EnvStack {
    std::vector<std::unique_ptr<envs::Environment>> layers;
    envs::Environment *top = nullptr;
};

EnvStack build_env(const ExperimentConfig &config);

std::unique_ptr<ActorCritic> build_agent(const ExperimentConfig &config,
                                         const envs::EnvSpec &spec, std::mt19937_64 &rng);

/// Full training run for one seed; returns the per-iteration records.
std::vector<TrainingRecord> train_single_seed(const ExperimentConfig &config,
                                              std::uint64_t seed);

/// Root directory that relative output paths resolve against; taken from the
/// QPPO_OUTPUT_ROOT environment variable, defaulting to the working directory.
std::filesystem::path output_root();

std::filesystem::path resolve_output_dir(const ExperimentConfig &config);

/**
 * Trains every seed (independent rngs, seed-level parallelism only), writing
 * seed_<s>.csv and seed_<s>_checkpoint.json per seed plus aggregate.csv
 * (env_steps, mean, std across seeds) and aggregate.svg under the resolved
 * output directory.
 */
void run_experiment(const ExperimentConfig &config);

void write_seed_csv(const std::filesystem::path &path,
                    const std::vector<TrainingRecord> &records);
std::vector<TrainingRecord> read_seed_csv(const std::filesystem::path &path);

struct AggregateRow {
    std::int64_t env_steps = 0;
    double mean = 0.0;
    double stddev = 0.0; // population std across seeds
};

std::vector<AggregateRow> aggregate_records(
    const std::vector<std::vector<TrainingRecord>> &per_seed);

/// Recomputes aggregate.csv (and the svg plot) from the seed_*.csv files in `dir`.
void write_aggregate(const std::filesystem::path &dir);

struct GroupCount {
    std::string name;
    std::int64_t count = 0;
};

struct ParameterReport {
    std::vector<GroupCount> breakdown;
    std::int64_t actor_total = 0;
    std::int64_t critic_total = 0;
    std::int64_t total = 0;
};

ParameterReport report_parameters(const ExperimentConfig &config);
std::string format_parameter_report(const ParameterReport &report);

struct DeadSlotReport {
    std::string observable; // label like "mu_0", "sigma_0", "v_2"
    std::vector<diff::SlotId> dead;
};

struct VarianceRow {
    int n_qubits = 0;
    double mean = 0.0;
    double variance = 0.0;
};

struct CircuitAnalysis {
    std::vector<DeadSlotReport> per_observable;
    std::vector<diff::SlotId> dead_for_all; // below tolerance for every readout observable
    std::vector<VarianceRow> variance;      // ordered by qubit count
};

/// Dead-parameter scan per readout observable plus the vanishing-variance
/// ladder over stack factors 1..stack_factor of the configured circuit.
CircuitAnalysis analyze_circuit(const ExperimentConfig &config);
nlohmann::json analysis_to_json(const CircuitAnalysis &analysis);
std::string format_analysis(const CircuitAnalysis &analysis);

} // namespace qppo::harness
