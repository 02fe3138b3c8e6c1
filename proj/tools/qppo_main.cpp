// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point: train experiments, report parameter counts,
// analyze circuits and (re)aggregate seed logs.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qppo/experiment.hpp"

int main(int argc, char **argv) {
    CLI::App app{"quantum PPO trainer for continuous-action control tasks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string aggregate_dir;

    CLI::App *train = app.add_subcommand("train", "run every seed of an experiment config");
    train->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App *params = app.add_subcommand("params", "trainable-parameter breakdown of a config");
    params->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App *analyze =
        app.add_subcommand("analyze", "dead-parameter and expectation-variance report");
    analyze->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App *aggregate =
        app.add_subcommand("aggregate", "recompute aggregate.csv/svg from seed CSVs");
    aggregate->add_option("dir", aggregate_dir, "directory holding seed_*.csv files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto config = qppo::harness::ExperimentConfig::load_file(config_path);
            const auto dir = qppo::harness::resolve_output_dir(config);
            std::cout << "training '" << config.name << "' (" << config.seeds.size()
                      << " seeds) -> " << dir.string() << std::endl;
            qppo::harness::run_experiment(config);
            std::cout << "done; aggregate at " << (dir / "aggregate.csv").string() << std::endl;
        } else if (params->parsed()) {
            const auto config = qppo::harness::ExperimentConfig::load_file(config_path);
            std::cout << qppo::harness::format_parameter_report(
                qppo::harness::report_parameters(config));
        } else if (analyze->parsed()) {
            const auto config = qppo::harness::ExperimentConfig::load_file(config_path);
            const auto analysis = qppo::harness::analyze_circuit(config);
            std::cout << qppo::harness::format_analysis(analysis);
            const auto dir = qppo::harness::resolve_output_dir(config);
            std::filesystem::create_directories(dir);
            std::ofstream out(dir / "analysis.json", std::ios::binary);
            out << qppo::harness::analysis_to_json(analysis).dump(2) << '\n';
            std::cout << "written " << (dir / "analysis.json").string() << std::endl;
        } else if (aggregate->parsed()) {
            qppo::harness::write_aggregate(aggregate_dir);
            std::cout << "written " << (std::filesystem::path(aggregate_dir) / "aggregate.csv").string()
                      << std::endl;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
