#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fockopt/experiments.hpp"
#include "fockopt/types.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> backend;
    std::optional<std::int64_t> shots;
    std::optional<int> threads;
};

void add_common_flags(CLI::App* app, Overrides& ov) {
    app->add_option("--config", ov.config_path, "JSON config file");
    app->add_option("--seed", ov.seed, "run seed (overrides config)");
    app->add_option("--out", ov.out, "output directory (overrides config)");
    app->add_option("--backend", ov.backend,
                    "boson_exact | fermion_exact | dvps_exact | boson_sampled");
    app->add_option("--shots", ov.shots, "shots for the sampled backend");
    app->add_option("--threads", ov.threads, "worker threads");
}

fockopt::ExperimentConfig load_config(const std::string& experiment, const Overrides& ov) {
    nlohmann::json j = nlohmann::json::object();
    if (!ov.config_path.empty()) {
        std::ifstream is(ov.config_path);
        if (!is) throw fockopt::ConfigError("cannot read config file " + ov.config_path);
        is >> j;
    }
    fockopt::ExperimentConfig cfg = fockopt::ExperimentConfig::from_json(j);
    if (!experiment.empty()) cfg.experiment = experiment;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out) cfg.out_dir = *ov.out;
    if (ov.backend) cfg.backend = fockopt::backend_from_string(*ov.backend);
    if (ov.shots) cfg.shots = *ov.shots;
    if (ov.threads) cfg.threads = *ov.threads;
    if (cfg.experiment.empty()) throw fockopt::ConfigError("no experiment selected");
    if (cfg.threads < 1) throw fockopt::ConfigError("threads must be >= 1");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fockopt: linear-optics sampling experiments"};
    app.require_subcommand(0, 1);

    Overrides ov;
    add_common_flags(&app, ov);
    std::string experiment_flag;
    app.add_option("--experiment", experiment_flag,
                   "experiment name (alternative to using a subcommand)");

    const std::vector<std::string> names{"sweep",           "solve",     "variance", "spectrum",
                                         "rotosolve_boson", "dvps_bank", "sample"};
    std::vector<std::pair<CLI::App*, Overrides>> subs;
    subs.reserve(names.size());
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        subs.emplace_back(sub, Overrides{});
    }
    for (std::size_t i = 0; i < names.size(); ++i) add_common_flags(subs[i].first, subs[i].second);

    CLI11_PARSE(app, argc, argv);

    std::string experiment = experiment_flag;
    Overrides effective = ov;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (subs[i].first->parsed()) {
            experiment = names[i];
            const Overrides& so = subs[i].second;
            if (!so.config_path.empty()) effective.config_path = so.config_path;
            if (so.seed) effective.seed = so.seed;
            if (so.out) effective.out = so.out;
            if (so.backend) effective.backend = so.backend;
            if (so.shots) effective.shots = so.shots;
            if (so.threads) effective.threads = so.threads;
        }
    }

    try {
        const fockopt::ExperimentConfig cfg = load_config(experiment, effective);
        fockopt::run_experiment(cfg);
        std::cout << "wrote " << cfg.out_dir << " (config " << cfg.config_hash() << ")\n";
        return 0;
    } catch (const fockopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const fockopt::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << " (best residual " << e.best_residual << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
