#include "fockopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fockopt/util.hpp"

namespace fockopt {

using std::numbers::pi;

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::MaxSteps: return "max_steps";
        case TerminationReason::CostTolerance: return "cost_tolerance";
        case TerminationReason::TargetReached: return "target_reached";
    }
    return "unknown";
}

std::optional<TerminationReason> run_termination(int sweeps_done, double sweep_improvement,
                                                 double current_cost, const TerminationCriteria& laws) {
    if (laws.target_cost && current_cost <= *laws.target_cost + laws.target_slack)
        return TerminationReason::TargetReached;
    if (sweeps_done > 0 && sweep_improvement < laws.cost_tol) return TerminationReason::CostTolerance;
    if (sweeps_done >= laws.max_sweeps) return TerminationReason::MaxSteps;
    return std::nullopt;
}

namespace {

RVec canonical(const RVec& theta) {
    RVec out = theta;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = std::fmod(out[i], 2.0 * pi);
        if (out[i] < 0.0) out[i] += 2.0 * pi;
    }
    return out;
}

void record(OptimizerTrace& trace, int sweep, int coordinate, const RVec& theta, double cost,
            long long evals) {
    trace.steps.push_back({sweep, coordinate, canonical(theta), cost, evals});
}

void require_finite(double cost, OptimizerTrace& trace) {
    if (!std::isfinite(cost)) throw NonFiniteCostError("optimizer: non-finite cost", std::move(trace));
}

bool target_hit(double cost, const TerminationCriteria& laws) {
    return laws.target_cost && cost <= *laws.target_cost + laws.target_slack;
}

}  // namespace

OptimizerTrace gradient_descent(const CostOracle& oracle, RVec theta0, double learning_rate,
                                int harmonics, const TerminationCriteria& laws) {
    if (learning_rate <= 0.0) throw std::invalid_argument("gradient_descent: learning rate must be positive");
    if (harmonics < 1) throw std::invalid_argument("gradient_descent: harmonics must be positive");

    OptimizerTrace trace;
    RVec theta = std::move(theta0);
    double cost = oracle.probe(theta);
    record(trace, 0, -1, theta, cost, oracle.eval_count());
    require_finite(cost, trace);

    for (int iter = 1;; ++iter) {
        RVec grad(oracle.num_params());
        for (int j = 0; j < oracle.num_params(); ++j)
            grad[j] = harmonics == 1 ? psr_gradient_two_point(oracle, theta, j)
                                     : psr_gradient_general(oracle, theta, j, harmonics);
        theta -= learning_rate * grad;

        const double next = oracle.probe(theta);
        record(trace, iter, -1, theta, next, oracle.eval_count());
        require_finite(next, trace);

        if (const auto reason = run_termination(iter, cost - next, next, laws)) {
            trace.terminated_by = *reason;
            return trace;
        }
        cost = next;
    }
}

OptimizerTrace rotosolve(const CostOracle& oracle, RVec theta0, const TerminationCriteria& laws) {
    OptimizerTrace trace;
    RVec theta = std::move(theta0);
    double cost = oracle.probe(theta);
    record(trace, 0, -1, theta, cost, oracle.eval_count());
    require_finite(cost, trace);

    for (int sweep = 1;; ++sweep) {
        const double sweep_start = cost;
        for (int j = 0; j < oracle.num_params(); ++j) {
            RVec probe = theta;
            probe[j] = 0.0;
            const double f0 = oracle.eval(probe);
            probe[j] = pi / 2.0;
            const double fp = oracle.eval(probe);
            probe[j] = -pi / 2.0;
            const double fm = oracle.eval(probe);

            const double X = fp - fm;
            const double Y = 2.0 * f0 - fp - fm;
            if (X == 0.0 && Y == 0.0) {
                trace.flat_coordinates.push_back(j);
                record(trace, sweep, j, theta, cost, oracle.eval_count());
                continue;
            }
            theta[j] = -pi / 2.0 - std::atan2(Y, X);

            // f(x) = (Y/2) cos x + (X/2) sin x + B; the update lands on the
            // closed-form minimum B - sqrt(X^2 + Y^2)/2, no fourth sample.
            const double offset = f0 - Y / 2.0;
            cost = offset - 0.5 * std::hypot(X, Y);
            record(trace, sweep, j, theta, cost, oracle.eval_count());
            require_finite(cost, trace);
            if (target_hit(cost, laws)) {
                trace.terminated_by = TerminationReason::TargetReached;
                return trace;
            }
        }
        if (const auto reason = run_termination(sweep, sweep_start - cost, cost, laws)) {
            trace.terminated_by = *reason;
            return trace;
        }
    }
}

OptimizerTrace oicd(const CostOracle& oracle, RVec theta0, int harmonics,
                    const TerminationCriteria& laws) {
    if (harmonics < 1) throw std::invalid_argument("oicd: harmonics must be positive");

    OptimizerTrace trace;
    RVec theta = std::move(theta0);
    double cost = oracle.probe(theta);
    record(trace, 0, -1, theta, cost, oracle.eval_count());
    require_finite(cost, trace);

    const std::vector<double> xs = fourier_sample_points(harmonics);
    for (int sweep = 1;; ++sweep) {
        const double sweep_start = cost;
        for (int j = 0; j < oracle.num_params(); ++j) {
            RVec probe = theta;
            std::vector<double> samples;
            samples.reserve(xs.size());
            for (double x : xs) {
                probe[j] = x;
                samples.push_back(oracle.eval(probe));
            }
            const FourierSpectrum spectrum = fourier_coefficients(samples);
            const StationarySet stationary = stationary_points(spectrum);
            if (!stationary.constant && !stationary.points.empty()) {
                const auto best = std::min_element(
                    stationary.points.begin(), stationary.points.end(),
                    [](const StationaryPoint& a, const StationaryPoint& b) { return a.value < b.value; });
                theta[j] = best->x;
                cost = best->value;
            }
            record(trace, sweep, j, theta, cost, oracle.eval_count());
            require_finite(cost, trace);
            if (target_hit(cost, laws)) {
                trace.terminated_by = TerminationReason::TargetReached;
                return trace;
            }
        }
        if (const auto reason = run_termination(sweep, sweep_start - cost, cost, laws)) {
            trace.terminated_by = *reason;
            return trace;
        }
    }
}

void write_trace_csv(std::ostream& os, const OptimizerTrace& trace) {
    os << "sweep,coordinate,cost,cumulative_evals\n";
    for (const auto& s : trace.steps)
        os << s.sweep << ',' << s.coordinate << ',' << format_double(s.cost) << ','
           << s.cumulative_evals << '\n';
}

nlohmann::json run_summary_json(const OptimizerTrace& trace) {
    nlohmann::json theta = nlohmann::json::array();
    for (Eigen::Index i = 0; i < trace.final_theta().size(); ++i) theta.push_back(trace.final_theta()[i]);
    return {{"final_theta", std::move(theta)},
            {"final_cost", trace.final_cost()},
            {"terminated_by", to_string(trace.terminated_by)},
            {"total_evals", trace.total_evals()},
            {"steps", trace.steps.size() - 1}};
}

}  // namespace fockopt
