#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fockopt {

enum class Backend { BosonExact, FermionExact, DvpsExact, BosonSampled };

Backend backend_from_string(const std::string& name);
const char* to_string(Backend b);

// Effective settings of one experiment run. Defaults here are desk-scale;
// the JSON config and CLI flags override them field by field.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 1;
    Backend backend = Backend::BosonExact;
    std::int64_t shots = 100000;  // used by the sampled backend

    struct Sweep {
        int modes = 4;
        int photons = 2;
        int grid = 41;
    } sweep;

    struct Solve {
        int bits = 8;
        bool constrained = true;
        int weight = 0;  // 0 selects floor(bits/2)
        int instances = 5;
        int max_sweeps = 40;
        double learning_rate = 0.05;
        double target_slack = 1e-4;
    } solve;

    struct Variance {
        std::vector<int> sizes{4, 6, 8};
        int trials = 200;
    } variance;

    struct Spectrum {
        int bits = 6;
        int instances = 20;
        std::vector<int> photons{1, 2, 3, 4};
    } spectrum;

    struct RotosolveBoson {
        int bits = 6;
        int photons = 4;
        int rotosolve_sweeps = 12;
        int gd_iterations = 4;
    } rotosolve_boson;

    struct DvpsBank {
        int grid = 17;  // inclusive grid over [0, 2 pi]
        int restarts = 100;
        std::vector<std::vector<int>> ancillas{{1, 0}, {0, 1}, {1, 1}};
    } dvps_bank;

    struct Sample {
        std::string circuit_path;
        std::vector<double> theta;
        std::vector<int> input;
        std::string statistics = "boson";
        std::int64_t shots = 1000;  // 0 writes the exact distribution
    } sample;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    std::string config_hash() const;
};

void run_sweep(const ExperimentConfig& cfg);
void run_solve(const ExperimentConfig& cfg);
void run_variance(const ExperimentConfig& cfg);
void run_spectrum(const ExperimentConfig& cfg);
void run_rotosolve_boson(const ExperimentConfig& cfg);
void run_dvps_bank(const ExperimentConfig& cfg);
void run_sample(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment. Throws ConfigError for unknown names.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace fockopt
