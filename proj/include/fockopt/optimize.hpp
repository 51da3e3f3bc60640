#pragma once

#include <iosfwd>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "fockopt/landscape.hpp"

namespace fockopt {

enum class TerminationReason { MaxSteps, CostTolerance, TargetReached };

const char* to_string(TerminationReason r);

struct TerminationCriteria {
    int max_sweeps = 100;
    double cost_tol = 1e-8;  // full-sweep improvement threshold; 1e-3 suits sampled oracles
    std::optional<double> target_cost;
    double target_slack = 1e-9;
};

// Stop decision after a completed sweep (or a coordinate update for the
// target check). nullopt means keep going.
std::optional<TerminationReason> run_termination(int sweeps_done, double sweep_improvement,
                                                 double current_cost, const TerminationCriteria& laws);

struct TraceStep {
    int sweep = 0;
    int coordinate = -1;  // -1 marks whole-vector records (initial state, GD steps)
    RVec theta;           // canonicalized mod 2pi
    double cost = 0.0;
    long long cumulative_evals = 0;
};

struct OptimizerTrace {
    std::vector<TraceStep> steps;
    TerminationReason terminated_by = TerminationReason::MaxSteps;
    std::vector<int> flat_coordinates;  // Rotosolve X = Y = 0 events

    const RVec& final_theta() const { return steps.back().theta; }
    double final_cost() const { return steps.back().cost; }
    long long total_evals() const { return steps.back().cumulative_evals; }
};

// Thrown when an oracle returns a non-finite cost; carries the partial trace.
struct NonFiniteCostError : std::runtime_error {
    NonFiniteCostError(const std::string& what, OptimizerTrace t)
        : std::runtime_error(what), trace(std::move(t)) {}
    OptimizerTrace trace;
};

// theta <- theta - h grad E, gradient from the parameter-shift rule
// (two-point when harmonics == 1, generalized otherwise).
OptimizerTrace gradient_descent(const CostOracle& oracle, RVec theta0, double learning_rate,
                                int harmonics, const TerminationCriteria& laws);

// Coordinate descent with the closed-form sinusoidal minimum from samples at
// absolute phases {0, +pi/2, -pi/2}; 3 evaluations per coordinate.
OptimizerTrace rotosolve(const CostOracle& oracle, RVec theta0, const TerminationCriteria& laws);

// Interpolation-based coordinate descent: DFT fit from 2n+1 samples, then
// jump to the best stationary point of the fitted series.
OptimizerTrace oicd(const CostOracle& oracle, RVec theta0, int harmonics,
                    const TerminationCriteria& laws);

void write_trace_csv(std::ostream& os, const OptimizerTrace& trace);
nlohmann::json run_summary_json(const OptimizerTrace& trace);

}  // namespace fockopt
