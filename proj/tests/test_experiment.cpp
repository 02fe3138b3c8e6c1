// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "qppo/experiment.hpp"

using namespace qppo;
using harness::AgentKind;
using harness::ExperimentConfig;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_mlp_config(const std::string &out) {
    ExperimentConfig cfg;
    cfg.name = "tiny";
    cfg.agent = AgentKind::ClassicalMlp;
    cfg.mlp_hidden = {4};
    cfg.train.total_steps = 600;
    cfg.train.batch_size = 200;
    cfg.train.minibatch_size = 50;
    cfg.train.epochs = 2;
    cfg.seeds = {1, 2};
    cfg.output_dir = out;
    return cfg;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qppo_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("defaults mirror the training hyperparameters") {
    const ExperimentConfig cfg = ExperimentConfig::from_json(nlohmann::json::object());
    CHECK(cfg.train.batch_size == 4000);
    CHECK(cfg.train.minibatch_size == 64);
    CHECK(cfg.train.epochs == 10);
    CHECK(cfg.train.gamma == 0.99);
    CHECK(cfg.train.gae_lambda == 0.1);
    CHECK(cfg.train.lr_variational == 0.001);
    CHECK(cfg.train.lr_input_scaling == 0.001);
    CHECK(cfg.train.lr_output_scaling == 0.01);
    CHECK(cfg.train.theta_init_std == 0.1);
    CHECK_FALSE(cfg.train.schedule.has_value());
    CHECK(cfg.seeds.size() == 5);
}

TEST_CASE("unknown keys are hard errors") {
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"naem", "typo"}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"train", {{"lr_lamda", 0.1}}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"env", {{"normalise", true}}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"vqc", {{"layers", 3}}}}), ConfigError);
}

TEST_CASE("config serialization round-trips") {
    ExperimentConfig cfg;
    cfg.name = "roundtrip";
    cfg.agent = AgentKind::Quantum;
    cfg.vqc.n_features = 3;
    cfg.vqc.n_layers = 5;
    cfg.vqc.embedding = vqc::EmbeddingMode::NormIdentity;
    cfg.vqc.readout = ReadoutId::M7;
    cfg.train.total_steps = 12000;
    cfg.train.schedule = ppo::LrSchedule{5000, 0.9};
    cfg.seeds = {7, 8};
    const auto parsed = ExperimentConfig::from_json(cfg.to_json());
    CHECK(parsed.to_json() == cfg.to_json());
}

TEST_CASE("embedding/normalization consistency is enforced") {
    ExperimentConfig cfg;
    cfg.agent = AgentKind::Quantum;
    cfg.vqc.n_features = 3;
    cfg.vqc.embedding = vqc::EmbeddingMode::NormIdentity;
    cfg.env.normalize = false;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg.vqc.embedding = vqc::EmbeddingMode::RawArctan;
    cfg.env.normalize = true;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg.env.normalize = std::nullopt; // derived from the embedding
    CHECK_NOTHROW(cfg.validate());
    CHECK_FALSE(cfg.normalize_observations());
    cfg.vqc.embedding = vqc::EmbeddingMode::NormSigmoid;
    CHECK(cfg.normalize_observations());
}

TEST_CASE("quantum parameter report reproduces the published totals") {
    ExperimentConfig cfg;
    cfg.agent = AgentKind::Quantum;
    cfg.vqc.n_features = 3;
    cfg.vqc.stack_factor = 2;
    cfg.vqc.n_layers = 7;
    cfg.vqc.readout = ReadoutId::M1;
    const auto report = harness::report_parameters(cfg);
    CHECK(report.actor_total == 86);
    CHECK(report.critic_total == 90);
    CHECK(report.total == 176);
}

TEST_CASE("classical parameter report lists the dense-layer breakdown") {
    ExperimentConfig cfg;
    cfg.agent = AgentKind::ClassicalMlp;
    cfg.mlp_hidden = {64, 64};
    const auto report = harness::report_parameters(cfg);
    CHECK(report.actor_total == 4482);
    CHECK(report.critic_total == 4481);
    CHECK(report.total == 8963);
    const std::string text = harness::format_parameter_report(report);
    CHECK(text.find("actor.dense0 (3->64)") != std::string::npos);
    CHECK(text.find("actor.log_sigma") != std::string::npos);
}

TEST_CASE("experiment run writes per-seed logs, aggregate and checkpoints") {
    TempDir tmp;
    ExperimentConfig cfg = tiny_mlp_config((tmp.path / "run").string());
    harness::run_experiment(cfg);

    const fs::path dir = tmp.path / "run";
    REQUIRE(fs::exists(dir / "seed_1.csv"));
    REQUIRE(fs::exists(dir / "seed_2.csv"));
    REQUIRE(fs::exists(dir / "aggregate.csv"));
    REQUIRE(fs::exists(dir / "aggregate.svg"));
    REQUIRE(fs::exists(dir / "seed_1_checkpoint.json"));
    REQUIRE(fs::exists(dir / "config.json"));

    const auto records = harness::read_seed_csv(dir / "seed_1.csv");
    REQUIRE(records.size() == 3); // 600 / 200
    CHECK(records[0].env_steps == 200);
    CHECK(records[2].env_steps == 600);
    for (std::size_t i = 1; i < records.size(); ++i) {
        CHECK(records[i].env_steps - records[i - 1].env_steps == 200);
    }

    const std::string header = slurp(dir / "seed_1.csv").substr(0, 88);
    CHECK(header.rfind("iteration,env_steps,mean_episode_reward,std_episode_reward,", 0) == 0);
}

TEST_CASE("aggregate matches a recomputation from the per-seed files") {
    TempDir tmp;
    ExperimentConfig cfg = tiny_mlp_config((tmp.path / "agg").string());
    harness::run_experiment(cfg);
    const fs::path dir = tmp.path / "agg";

    std::vector<std::vector<harness::TrainingRecord>> per_seed;
    per_seed.push_back(harness::read_seed_csv(dir / "seed_1.csv"));
    per_seed.push_back(harness::read_seed_csv(dir / "seed_2.csv"));
    const auto expected = harness::aggregate_records(per_seed);

    std::ifstream in(dir / "aggregate.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "env_steps,mean_episode_reward,std_episode_reward");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        REQUIRE(row < expected.size());
        const auto first_comma = line.find(',');
        const auto second_comma = line.find(',', first_comma + 1);
        const double mean = std::stod(line.substr(first_comma + 1, second_comma - first_comma));
        const double stddev = std::stod(line.substr(second_comma + 1));
        CHECK(std::abs(mean - expected[row].mean) < 1e-12);
        CHECK(std::abs(stddev - expected[row].stddev) < 1e-12);
        ++row;
    }
    CHECK(row == expected.size());
}

TEST_CASE("single seed aggregates to zero deviation") {
    TempDir tmp;
    ExperimentConfig cfg = tiny_mlp_config((tmp.path / "one").string());
    cfg.seeds = {3};
    harness::run_experiment(cfg);
    std::ifstream in(tmp.path / "one" / "aggregate.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
}

TEST_CASE("reruns are byte-identical") {
    TempDir tmp;
    ExperimentConfig cfg = tiny_mlp_config((tmp.path / "det").string());
    cfg.seeds = {11};
    harness::run_experiment(cfg);
    const std::string first = slurp(tmp.path / "det" / "seed_11.csv");
    harness::run_experiment(cfg);
    const std::string second = slurp(tmp.path / "det" / "seed_11.csv");
    CHECK(first == second);
}

TEST_CASE("output root comes from the environment") {
    TempDir tmp;
    setenv("QPPO_OUTPUT_ROOT", tmp.path.c_str(), 1);
    ExperimentConfig cfg;
    cfg.output_dir = "nested/run";
    CHECK(harness::resolve_output_dir(cfg) == tmp.path / "nested/run");
    unsetenv("QPPO_OUTPUT_ROOT");
    cfg.output_dir = (tmp.path / "abs").string();
    CHECK(harness::resolve_output_dir(cfg) == tmp.path / "abs");
}

TEST_CASE("circuit analysis flags the CZ single-layer dead set and orders variance rows") {
    ExperimentConfig cz;
    cz.agent = AgentKind::Quantum;
    cz.vqc.n_features = 3;
    cz.vqc.stack_factor = 2;
    cz.vqc.n_layers = 1;
    cz.vqc.entangler = vqc::EntanglerKind::CzChain;
    cz.vqc.readout = ReadoutId::M2; // critic reads Z_0 only
    const auto analysis = harness::analyze_circuit(cz);

    bool v0_has_dead = false;
    for (const auto &rep : analysis.per_observable) {
        if (rep.observable == "v_0") {
            v0_has_dead = !rep.dead.empty();
        }
    }
    CHECK(v0_has_dead);
    REQUIRE(analysis.variance.size() == 2);
    CHECK(analysis.variance[0].n_qubits == 3);
    CHECK(analysis.variance[1].n_qubits == 6);
    CHECK(analysis.variance[0].n_qubits < analysis.variance[1].n_qubits);

    // the layered CNOT/M1 circuit leaves no slot dead across the full readout
    // (single observables may still miss last-layer off-wire slots)
    ExperimentConfig cnot;
    cnot.agent = AgentKind::Quantum;
    cnot.vqc.n_features = 3;
    cnot.vqc.n_layers = 5;
    cnot.vqc.readout = ReadoutId::M1;
    const auto healthy = harness::analyze_circuit(cnot);
    CHECK(healthy.dead_for_all.empty());
    for (const auto &rep : healthy.per_observable) {
        if (rep.observable == "v_2") { // Z_2 pulls back onto every wire
            CHECK(rep.dead.empty());
        }
    }
}

TEST_CASE("invalid configs fail before any run starts") {
    ExperimentConfig cfg;
    cfg.env.name = "cartpole";
    CHECK_THROWS_AS(harness::run_experiment(cfg), ConfigError);
    cfg = ExperimentConfig{};
    cfg.seeds = {1, 1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_SUITE_END();
