// Copyright 2026 The qppo authors.
// SPDX-License-Identifier: Apache-2.0
#include "qppo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "qppo/checkpoint.hpp"
#include "qppo/mlp.hpp"
#include "qppo/pendulum.hpp"
#include "qppo/policy.hpp"
#include "qppo/wrappers.hpp"

namespace qppo::harness {

using nlohmann::json;

namespace {

// ---- number formatting: shortest round-trip representation ----

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &token) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{}) {
        throw ConfigError("could not parse number '" + token + "'");
    }
    return v;
}

// ---- strict-key JSON helpers ----

void check_keys(const json &j, std::initializer_list<const char *> allowed,
                const std::string &context) {
    if (!j.is_object()) {
        throw ConfigError(context + ": expected a JSON object");
    }
    for (const auto &item : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char *k) {
                return item.key() == k;
            }) == allowed.end()) {
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
        }
    }
}

ppo::TrainConfig train_from_json(const json &j) {
    check_keys(j,
               {"total_steps", "batch_size", "minibatch_size", "epochs", "gamma", "gae_lambda",
                "clip_eps", "lr_variational", "lr_input_scaling", "lr_output_scaling",
                "lr_schedule", "normalize_advantages", "entropy_coef", "optimizer",
                "theta_init_std"},
               "train");
    ppo::TrainConfig t;
    t.total_steps = j.value("total_steps", t.total_steps);
    t.batch_size = j.value("batch_size", t.batch_size);
    t.minibatch_size = j.value("minibatch_size", t.minibatch_size);
    t.epochs = j.value("epochs", t.epochs);
    t.gamma = j.value("gamma", t.gamma);
    t.gae_lambda = j.value("gae_lambda", t.gae_lambda);
    t.clip_eps = j.value("clip_eps", t.clip_eps);
    t.lr_variational = j.value("lr_variational", t.lr_variational);
    t.lr_input_scaling = j.value("lr_input_scaling", t.lr_input_scaling);
    t.lr_output_scaling = j.value("lr_output_scaling", t.lr_output_scaling);
    if (j.contains("lr_schedule") && !j.at("lr_schedule").is_null()) {
        const json &s = j.at("lr_schedule");
        check_keys(s, {"start_step", "decay"}, "train.lr_schedule");
        t.schedule = ppo::LrSchedule{s.at("start_step").get<std::int64_t>(),
                                     s.at("decay").get<double>()};
    }
    t.normalize_advantages = j.value("normalize_advantages", t.normalize_advantages);
    t.entropy_coef = j.value("entropy_coef", t.entropy_coef);
    if (j.contains("optimizer")) {
        const auto name = j.at("optimizer").get<std::string>();
        if (name == "adam") {
            t.optimizer = ppo::OptimizerKind::Adam;
        } else if (name == "sgd") {
            t.optimizer = ppo::OptimizerKind::Sgd;
        } else {
            throw ConfigError("train.optimizer: unknown optimizer '" + name + "'");
        }
    }
    t.theta_init_std = j.value("theta_init_std", t.theta_init_std);
    return t;
}

json train_to_json(const ppo::TrainConfig &t) {
    json j{{"total_steps", t.total_steps},
           {"batch_size", t.batch_size},
           {"minibatch_size", t.minibatch_size},
           {"epochs", t.epochs},
           {"gamma", t.gamma},
           {"gae_lambda", t.gae_lambda},
           {"clip_eps", t.clip_eps},
           {"lr_variational", t.lr_variational},
           {"lr_input_scaling", t.lr_input_scaling},
           {"lr_output_scaling", t.lr_output_scaling},
           {"normalize_advantages", t.normalize_advantages},
           {"entropy_coef", t.entropy_coef},
           {"optimizer", t.optimizer == ppo::OptimizerKind::Adam ? "adam" : "sgd"},
           {"theta_init_std", t.theta_init_std}};
    if (t.schedule) {
        j["lr_schedule"] = {{"start_step", t.schedule->start_step}, {"decay", t.schedule->decay}};
    } else {
        j["lr_schedule"] = nullptr;
    }
    return j;
}

std::string slot_name(const diff::SlotId &slot) {
    return (slot.group == diff::SlotId::Group::Lambda ? "lambda[" : "theta[") +
           std::to_string(slot.index) + "]";
}

} // namespace

bool ExperimentConfig::normalize_observations() const {
    if (env.normalize.has_value()) {
        return *env.normalize;
    }
    return agent == AgentKind::Quantum && vqc::is_normalized_mode(vqc.embedding);
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    check_keys(j,
               {"name", "agent", "env", "vqc", "mlp", "train", "seeds", "output_dir",
                "solved_threshold"},
               "config");
    ExperimentConfig cfg;
    cfg.name = j.value("name", cfg.name);
    if (j.contains("agent")) {
        const auto kind = j.at("agent").get<std::string>();
        if (kind == "quantum") {
            cfg.agent = AgentKind::Quantum;
        } else if (kind == "classical-mlp") {
            cfg.agent = AgentKind::ClassicalMlp;
        } else {
            throw ConfigError("config.agent: unknown agent kind '" + kind + "'");
        }
    }
    if (j.contains("env")) {
        const json &e = j.at("env");
        check_keys(e, {"name", "normalize", "feature_select"}, "env");
        cfg.env.name = e.value("name", cfg.env.name);
        if (e.contains("normalize")) {
            cfg.env.normalize = e.at("normalize").get<bool>();
        }
        if (e.contains("feature_select")) {
            cfg.env.feature_select = e.at("feature_select").get<std::vector<int>>();
        }
    }
    if (j.contains("vqc")) {
        const json &v = j.at("vqc");
        check_keys(v, {"n_features", "stack_factor", "n_layers", "embedding", "entangler",
                       "readout"},
                   "vqc");
        cfg.vqc.n_features = v.value("n_features", 0); // 0 = derive from env
        cfg.vqc.stack_factor = v.value("stack_factor", 1);
        cfg.vqc.n_layers = v.value("n_layers", 1);
        if (v.contains("embedding")) {
            cfg.vqc.embedding = vqc::embedding_from_string(v.at("embedding").get<std::string>());
        }
        if (v.contains("entangler")) {
            cfg.vqc.entangler = vqc::entangler_from_string(v.at("entangler").get<std::string>());
        }
        if (v.contains("readout")) {
            cfg.vqc.readout = readout_from_string(v.at("readout").get<std::string>());
        }
    }
    if (j.contains("mlp")) {
        const json &m = j.at("mlp");
        check_keys(m, {"hidden"}, "mlp");
        cfg.mlp_hidden = m.value("hidden", cfg.mlp_hidden);
    }
    if (j.contains("train")) {
        cfg.train = train_from_json(j.at("train"));
    }
    if (j.contains("seeds")) {
        cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.solved_threshold = j.value("solved_threshold", cfg.solved_threshold);
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j{{"name", name},
           {"agent", agent == AgentKind::Quantum ? "quantum" : "classical-mlp"},
           {"train", train_to_json(train)},
           {"seeds", seeds},
           {"output_dir", output_dir},
           {"solved_threshold", solved_threshold}};
    json e{{"name", env.name}};
    if (env.normalize) {
        e["normalize"] = *env.normalize;
    }
    if (env.feature_select) {
        e["feature_select"] = *env.feature_select;
    }
    j["env"] = std::move(e);
    if (agent == AgentKind::Quantum) {
        j["vqc"] = {{"n_features", vqc.n_features},
                    {"stack_factor", vqc.stack_factor},
                    {"n_layers", vqc.n_layers},
                    {"embedding", vqc::to_string(vqc.embedding)},
                    {"entangler", vqc::to_string(vqc.entangler)},
                    {"readout", to_string(vqc.readout)}};
    } else {
        j["mlp"] = {{"hidden", mlp_hidden}};
    }
    return j;
}

ExperimentConfig ExperimentConfig::load_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    ExperimentConfig cfg = from_json(j);
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (env.name != "pendulum") {
        throw ConfigError("unknown environment '" + env.name + "'");
    }
    if (seeds.empty()) {
        throw ConfigError("config: seed list must be non-empty");
    }
    train.validate();
    if (agent == AgentKind::Quantum) {
        const bool norm = normalize_observations();
        if (vqc::is_normalized_mode(vqc.embedding) && !norm) {
            throw ConfigError("NORM_* embeddings require normalized observations");
        }
        if (!vqc::is_normalized_mode(vqc.embedding) && norm) {
            throw ConfigError("RAW_* embeddings expect unnormalized observations");
        }
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t k = i + 1; k < seeds.size(); ++k) {
            if (seeds[i] == seeds[k]) {
                throw ConfigError("config: duplicate seed " + std::to_string(seeds[i]));
            }
        }
    }
}

EnvStack build_env(const ExperimentConfig &config) {
    EnvStack stack;
    if (config.env.name == "pendulum") {
        stack.layers.push_back(std::make_unique<envs::PendulumEnv>());
    } else {
        throw ConfigError("unknown environment '" + config.env.name + "'");
    }
    stack.top = stack.layers.back().get();
    if (config.env.feature_select) {
        stack.layers.push_back(
            std::make_unique<envs::FeatureSelectWrapper>(*stack.top, *config.env.feature_select));
        stack.top = stack.layers.back().get();
    }
    if (config.normalize_observations()) {
        stack.layers.push_back(std::make_unique<envs::NormalizeObservationWrapper>(*stack.top));
        stack.top = stack.layers.back().get();
    }
    return stack;
}

std::unique_ptr<ActorCritic> build_agent(const ExperimentConfig &config,
                                         const envs::EnvSpec &spec, std::mt19937_64 &rng) {
    if (config.agent == AgentKind::Quantum) {
        vqc::VqcConfig actor_cfg = config.vqc;
        if (actor_cfg.n_features == 0) {
            actor_cfg.n_features = spec.obs_dim;
        }
        if (actor_cfg.n_features != spec.obs_dim) {
            throw ConfigError("vqc.n_features (" + std::to_string(actor_cfg.n_features) +
                              ") does not match the environment observation size (" +
                              std::to_string(spec.obs_dim) + ")");
        }
        actor_cfg.n_actions = spec.act_dim;
        vqc::VqcConfig critic_cfg = actor_cfg;
        critic_cfg.n_actions = 1;
        return std::make_unique<qpolicy::QuantumActorCritic>(actor_cfg, critic_cfg, rng,
                                                             config.train.theta_init_std);
    }
    return std::make_unique<qpolicy::MlpActorCritic>(spec.obs_dim, spec.act_dim,
                                                     config.mlp_hidden, rng);
}

namespace {

struct SeedRun {
    std::vector<TrainingRecord> records;
    std::unique_ptr<ActorCritic> agent;
};

SeedRun run_training(const ExperimentConfig &config, std::uint64_t seed) {
    config.validate();
    EnvStack env = build_env(config);
    std::mt19937_64 rng(seed);
    SeedRun run;
    run.agent = build_agent(config, env.top->spec(), rng);
    ppo::RolloutContext ctx(*env.top);

    const auto iterations =
        static_cast<int>(config.train.total_steps / config.train.batch_size);
    run.records.reserve(static_cast<std::size_t>(iterations));
    std::int64_t completed = 0;

    for (int iter = 0; iter < iterations; ++iter) {
        const auto start = std::chrono::steady_clock::now();
        const double mult = ppo::lr_multiplier(config.train, completed);
        ppo::RolloutBatch batch =
            ppo::collect_rollout(*run.agent, ctx, config.train.batch_size, rng);
        ppo::compute_gae(batch, config.train.gamma, config.train.gae_lambda);
        ppo::ppo_update(*run.agent, batch, config.train, rng, mult);
        completed += config.train.batch_size;

        TrainingRecord rec;
        rec.iteration = iter;
        rec.env_steps = completed;
        rec.episode_count = static_cast<int>(batch.episode_returns.size());
        if (batch.episode_returns.empty()) {
            rec.mean_episode_reward = std::nan("");
            rec.std_episode_reward = std::nan("");
        } else {
            double mean = 0.0;
            for (double r : batch.episode_returns) {
                mean += r;
            }
            mean /= static_cast<double>(batch.episode_returns.size());
            double var = 0.0;
            for (double r : batch.episode_returns) {
                var += (r - mean) * (r - mean);
            }
            rec.mean_episode_reward = mean;
            rec.std_episode_reward =
                std::sqrt(var / static_cast<double>(batch.episode_returns.size()));
        }
        rec.lr_variational = config.train.lr_variational * mult;
        rec.lr_input_scaling = config.train.lr_input_scaling * mult;
        rec.lr_output_scaling = config.train.lr_output_scaling * mult;
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        run.records.push_back(rec);
    }
    return run;
}

} // namespace

std::vector<TrainingRecord> train_single_seed(const ExperimentConfig &config,
                                              std::uint64_t seed) {
    return run_training(config, seed).records;
}

std::filesystem::path output_root() {
    if (const char *root = std::getenv("QPPO_OUTPUT_ROOT")) {
        return {root};
    }
    return std::filesystem::current_path();
}

std::filesystem::path resolve_output_dir(const ExperimentConfig &config) {
    std::filesystem::path dir(config.output_dir);
    if (dir.is_absolute()) {
        return dir;
    }
    return output_root() / dir;
}

void write_seed_csv(const std::filesystem::path &path,
                    const std::vector<TrainingRecord> &records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << "iteration,env_steps,mean_episode_reward,std_episode_reward,"
           "lr_variational,lr_input_scaling,lr_output_scaling\n";
    for (const auto &r : records) {
        out << r.iteration << ',' << r.env_steps << ',' << format_double(r.mean_episode_reward)
            << ',' << format_double(r.std_episode_reward) << ','
            << format_double(r.lr_variational) << ',' << format_double(r.lr_input_scaling) << ','
            << format_double(r.lr_output_scaling) << '\n';
    }
}

std::vector<TrainingRecord> read_seed_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::string line;
    std::getline(in, line); // header
    std::vector<TrainingRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string token;
        std::vector<std::string> tokens;
        while (std::getline(ss, token, ',')) {
            tokens.push_back(token);
        }
        if (tokens.size() != 7) {
            throw ConfigError("malformed CSV row in " + path.string());
        }
        TrainingRecord r;
        r.iteration = static_cast<int>(parse_double(tokens[0]));
        r.env_steps = static_cast<std::int64_t>(parse_double(tokens[1]));
        r.mean_episode_reward = tokens[2] == "nan" ? std::nan("") : parse_double(tokens[2]);
        r.std_episode_reward = tokens[3] == "nan" ? std::nan("") : parse_double(tokens[3]);
        r.lr_variational = parse_double(tokens[4]);
        r.lr_input_scaling = parse_double(tokens[5]);
        r.lr_output_scaling = parse_double(tokens[6]);
        records.push_back(r);
    }
    return records;
}

std::vector<AggregateRow> aggregate_records(
    const std::vector<std::vector<TrainingRecord>> &per_seed) {
    if (per_seed.empty()) {
        return {};
    }
    const std::size_t rows = per_seed.front().size();
    for (const auto &records : per_seed) {
        if (records.size() != rows) {
            throw ConfigError("aggregate: seeds have differing iteration counts");
        }
    }
    std::vector<AggregateRow> out(rows);
    const double n = static_cast<double>(per_seed.size());
    for (std::size_t i = 0; i < rows; ++i) {
        double mean = 0.0;
        for (const auto &records : per_seed) {
            mean += records[i].mean_episode_reward;
        }
        mean /= n;
        double var = 0.0;
        for (const auto &records : per_seed) {
            const double d = records[i].mean_episode_reward - mean;
            var += d * d;
        }
        out[i] = {per_seed.front()[i].env_steps, mean, std::sqrt(var / n)};
    }
    return out;
}

namespace {

void write_aggregate_csv(const std::filesystem::path &path,
                         const std::vector<AggregateRow> &rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << "env_steps,mean_episode_reward,std_episode_reward\n";
    for (const auto &r : rows) {
        out << r.env_steps << ',' << format_double(r.mean) << ',' << format_double(r.stddev)
            << '\n';
    }
}

// Minimal standalone line plot: mean curve with a +-std band.
void write_aggregate_svg(const std::filesystem::path &path,
                         const std::vector<AggregateRow> &rows) {
    std::vector<AggregateRow> finite;
    for (const auto &r : rows) {
        if (std::isfinite(r.mean) && std::isfinite(r.stddev)) {
            finite.push_back(r);
        }
    }
    if (finite.size() < 2) {
        return;
    }
    const double width = 720.0;
    const double height = 440.0;
    const double ml = 70.0;
    const double mr = 20.0;
    const double mt = 20.0;
    const double mb = 50.0;
    double x_min = static_cast<double>(finite.front().env_steps);
    double x_max = static_cast<double>(finite.back().env_steps);
    double y_min = finite.front().mean - finite.front().stddev;
    double y_max = y_min;
    for (const auto &r : finite) {
        y_min = std::min(y_min, r.mean - r.stddev);
        y_max = std::max(y_max, r.mean + r.stddev);
    }
    if (y_max == y_min) {
        y_max = y_min + 1.0;
    }
    const auto sx = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
    };
    const auto sy = [&](double y) {
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
    for (const auto &r : finite) {
        out << sx(static_cast<double>(r.env_steps)) << ',' << sy(r.mean + r.stddev) << ' ';
    }
    for (auto it = finite.rbegin(); it != finite.rend(); ++it) {
        out << sx(static_cast<double>(it->env_steps)) << ',' << sy(it->mean - it->stddev) << ' ';
    }
    out << "\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"#3182bd\" stroke-width=\"2\" points=\"";
    for (const auto &r : finite) {
        out << sx(static_cast<double>(r.env_steps)) << ',' << sy(r.mean) << ' ';
    }
    out << "\"/>\n";

    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_min + (x_max - x_min) * k / 4.0;
        const double yv = y_min + (y_max - y_min) * k / 4.0;
        out << "<text x=\"" << sx(xv) << "\" y=\"" << height - mb + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << static_cast<std::int64_t>(xv)
            << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << static_cast<int>(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">environment steps</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">mean episode reward</text>\n";
    out << "</svg>\n";
}

} // namespace

void write_aggregate(const std::filesystem::path &dir) {
    std::vector<std::filesystem::path> seed_files;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("seed_", 0) == 0 && entry.path().extension() == ".csv") {
            seed_files.push_back(entry.path());
        }
    }
    if (seed_files.empty()) {
        throw ConfigError("no seed_*.csv files under " + dir.string());
    }
    std::sort(seed_files.begin(), seed_files.end());
    std::vector<std::vector<TrainingRecord>> per_seed;
    per_seed.reserve(seed_files.size());
    for (const auto &file : seed_files) {
        per_seed.push_back(read_seed_csv(file));
    }
    const std::vector<AggregateRow> rows = aggregate_records(per_seed);
    write_aggregate_csv(dir / "aggregate.csv", rows);
    write_aggregate_svg(dir / "aggregate.svg", rows);
}

void run_experiment(const ExperimentConfig &config) {
    config.validate();
    const std::filesystem::path dir = resolve_output_dir(config);
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "config.json", std::ios::binary);
        out << config.to_json().dump(2) << '\n';
    }

    // Seed-level parallelism only; every seed is a fully independent job.
    const unsigned workers =
        std::max(1U, std::min(static_cast<unsigned>(config.seeds.size()),
                              std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futures;
    std::size_t next = 0;

    const auto run_seed = [&config, &dir](std::uint64_t seed) {
        SeedRun run = run_training(config, seed);
        write_seed_csv(dir / ("seed_" + std::to_string(seed) + ".csv"), run.records);

        json snapshot;
        if (auto *quantum = dynamic_cast<qpolicy::QuantumActorCritic *>(run.agent.get())) {
            snapshot = checkpoint::quantum_agent_to_json(*quantum);
        } else if (auto *mlp = dynamic_cast<qpolicy::MlpActorCritic *>(run.agent.get())) {
            snapshot = checkpoint::mlp_agent_to_json(*mlp);
        }
        std::ofstream out(dir / ("seed_" + std::to_string(seed) + "_checkpoint.json"),
                          std::ios::binary);
        out << snapshot.dump(2) << '\n';
    };

    while (next < config.seeds.size()) {
        futures.clear();
        for (unsigned w = 0; w < workers && next < config.seeds.size(); ++w, ++next) {
            const std::uint64_t seed = config.seeds[next];
            futures.push_back(std::async(std::launch::async, run_seed, seed));
        }
        for (auto &f : futures) {
            f.get();
        }
    }

    write_aggregate(dir);
}

ParameterReport report_parameters(const ExperimentConfig &config) {
    config.validate();
    EnvStack env = build_env(config);
    std::mt19937_64 rng(0);
    std::unique_ptr<ActorCritic> agent = build_agent(config, env.top->spec(), rng);
    ParameterReport report;

    if (auto *quantum = dynamic_cast<qpolicy::QuantumActorCritic *>(agent.get())) {
        for (auto &ref : quantum->groups()) {
            report.breakdown.push_back({ref.name, static_cast<std::int64_t>(ref.group->size())});
            const bool is_actor = ref.name.rfind("actor", 0) == 0;
            (is_actor ? report.actor_total : report.critic_total) +=
                static_cast<std::int64_t>(ref.group->size());
        }
    } else if (auto *mlp = dynamic_cast<qpolicy::MlpActorCritic *>(agent.get())) {
        const auto &spec = env.top->spec();
        std::vector<int> dims{spec.obs_dim};
        for (int h : config.mlp_hidden) {
            dims.push_back(h);
        }
        for (std::size_t head = 0; head < 2; ++head) {
            const bool is_actor = head == 0;
            std::vector<int> net_dims = dims;
            net_dims.push_back(is_actor ? spec.act_dim : 1);
            const std::string prefix = is_actor ? "actor" : "critic";
            std::int64_t total = 0;
            for (std::size_t l = 0; l + 1 < net_dims.size(); ++l) {
                const std::int64_t count =
                    static_cast<std::int64_t>(net_dims[l] + 1) * net_dims[l + 1];
                report.breakdown.push_back({prefix + ".dense" + std::to_string(l) + " (" +
                                                std::to_string(net_dims[l]) + "->" +
                                                std::to_string(net_dims[l + 1]) + ")",
                                            count});
                total += count;
            }
            if (is_actor) {
                report.breakdown.push_back({"actor.log_sigma", spec.act_dim});
                total += spec.act_dim;
            }
            (is_actor ? report.actor_total : report.critic_total) = total;
        }
        if (report.actor_total != mlp->actor_parameter_count() ||
            report.critic_total != mlp->critic_parameter_count()) {
            throw ConfigError("parameter report disagrees with the instantiated agent");
        }
    }
    report.total = report.actor_total + report.critic_total;
    if (report.total != agent->parameter_count()) {
        throw ConfigError("parameter report disagrees with the instantiated agent");
    }
    return report;
}

std::string format_parameter_report(const ParameterReport &report) {
    std::ostringstream out;
    out << "trainable parameters\n";
    for (const auto &row : report.breakdown) {
        out << "  " << row.name;
        for (std::size_t pad = row.name.size(); pad < 34; ++pad) {
            out << ' ';
        }
        out << row.count << '\n';
    }
    out << "  actor total                       " << report.actor_total << '\n';
    out << "  critic total                      " << report.critic_total << '\n';
    out << "  total                             " << report.total << '\n';
    return out.str();
}

CircuitAnalysis analyze_circuit(const ExperimentConfig &config) {
    if (config.agent != AgentKind::Quantum) {
        throw ConfigError("analyze_circuit: config does not describe a quantum agent");
    }
    config.validate();
    EnvStack env = build_env(config);
    const envs::EnvSpec &spec = env.top->spec();

    vqc::VqcConfig circuit_cfg = config.vqc;
    if (circuit_cfg.n_features == 0) {
        circuit_cfg.n_features = spec.obs_dim;
    }
    circuit_cfg.n_actions = spec.act_dim;
    const vqc::CircuitPlan plan = vqc::build_plan(circuit_cfg);
    const qpolicy::ReadoutConfig readout =
        qpolicy::build_readout(circuit_cfg.readout, circuit_cfg.n_qubits(), spec.act_dim);

    std::vector<std::pair<std::string, qsim::ZProductObservable>> labeled;
    for (int i = 0; i < readout.n_actions; ++i) {
        labeled.emplace_back("mu_" + std::to_string(i), readout.mu_obs[static_cast<std::size_t>(i)]);
        labeled.emplace_back("sigma_" + std::to_string(i),
                             readout.sigma_obs[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 0; i < readout.value_obs.size(); ++i) {
        labeled.emplace_back("v_" + std::to_string(i), readout.value_obs[i]);
    }

    CircuitAnalysis analysis;
    std::vector<qsim::ZProductObservable> all_obs;
    for (const auto &[label, obs] : labeled) {
        const std::vector<qsim::ZProductObservable> single{obs};
        analysis.per_observable.push_back({label, diff::dead_parameter_scan(plan, single, 20, 1e-10)});
        all_obs.push_back(obs);
    }
    analysis.dead_for_all = diff::dead_parameter_scan(plan, all_obs, 20, 1e-10);

    for (int stack = 1; stack <= circuit_cfg.stack_factor; ++stack) {
        vqc::VqcConfig ladder = circuit_cfg;
        ladder.stack_factor = stack;
        std::vector<int> all(static_cast<std::size_t>(ladder.n_qubits()));
        for (int q = 0; q < ladder.n_qubits(); ++q) {
            all[static_cast<std::size_t>(q)] = q;
        }
        const diff::VarianceStats stats =
            diff::variance_scan(ladder, qsim::ZProductObservable(all), 1000, 7);
        analysis.variance.push_back({ladder.n_qubits(), stats.mean, stats.variance});
    }
    std::sort(analysis.variance.begin(), analysis.variance.end(),
              [](const VarianceRow &a, const VarianceRow &b) { return a.n_qubits < b.n_qubits; });
    return analysis;
}

json analysis_to_json(const CircuitAnalysis &analysis) {
    json per_obs = json::array();
    for (const auto &rep : analysis.per_observable) {
        json dead = json::array();
        for (const auto &slot : rep.dead) {
            dead.push_back(slot_name(slot));
        }
        per_obs.push_back({{"observable", rep.observable}, {"dead_slots", std::move(dead)}});
    }
    json dead_all = json::array();
    for (const auto &slot : analysis.dead_for_all) {
        dead_all.push_back(slot_name(slot));
    }
    json variance = json::array();
    for (const auto &row : analysis.variance) {
        variance.push_back({{"n_qubits", row.n_qubits},
                            {"mean", row.mean},
                            {"variance", row.variance}});
    }
    return json{{"dead_parameters", std::move(per_obs)},
                {"dead_for_all_observables", std::move(dead_all)},
                {"expectation_variance", std::move(variance)}};
}

std::string format_analysis(const CircuitAnalysis &analysis) {
    std::ostringstream out;
    out << "dead-parameter scan (tol 1e-10, 20 trials)\n";
    for (const auto &rep : analysis.per_observable) {
        out << "  " << rep.observable << ": ";
        if (rep.dead.empty()) {
            out << "none";
        } else {
            for (std::size_t i = 0; i < rep.dead.size(); ++i) {
                out << (i ? ", " : "") << slot_name(rep.dead[i]);
            }
        }
        out << '\n';
    }
    out << "  dead for every readout observable: ";
    if (analysis.dead_for_all.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < analysis.dead_for_all.size(); ++i) {
            out << (i ? ", " : "") << slot_name(analysis.dead_for_all[i]);
        }
    }
    out << '\n';
    out << "expectation variance of the full Z product (1000 random draws)\n";
    for (const auto &row : analysis.variance) {
        out << "  " << row.n_qubits << " qubits: mean " << format_double(row.mean)
            << ", variance " << format_double(row.variance) << '\n';
    }
    return out.str();
}

} // namespace qppo::harness
