#pragma once

#include <atomic>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fockopt/types.hpp"

namespace fockopt {

struct OracleMetadata {
    int modes = 0;
    int particles = 0;
    Statistics stats = Statistics::Boson;
};

// Cost function E(theta) with an instrumented evaluation counter. probe()
// exists for trace bookkeeping and is deliberately not counted.
class CostOracle {
  public:
    using Fn = std::function<double(const RVec&)>;

    CostOracle(Fn fn, int num_params, OracleMetadata meta = {})
        : fn_(std::move(fn)), num_params_(num_params), meta_(meta),
          evals_(std::make_shared<std::atomic<long long>>(0)) {}

    double eval(const RVec& theta) const {
        evals_->fetch_add(1, std::memory_order_relaxed);
        return fn_(theta);
    }

    double probe(const RVec& theta) const { return fn_(theta); }

    int num_params() const { return num_params_; }
    const OracleMetadata& metadata() const { return meta_; }
    long long eval_count() const { return evals_->load(std::memory_order_relaxed); }
    void reset_count() const { evals_->store(0, std::memory_order_relaxed); }

  private:
    Fn fn_;
    int num_params_;
    OracleMetadata meta_;
    std::shared_ptr<std::atomic<long long>> evals_;
};

// f(x) = E(theta with theta_j = x) at the given sample angles.
std::vector<std::pair<double, double>> slice(const CostOracle& oracle, RVec theta, int j,
                                             const std::vector<double>& xs);

// Coefficients c_k, k in [-n_max, n_max], of a real trigonometric polynomial.
class FourierSpectrum {
  public:
    FourierSpectrum(int n_max, std::vector<Complex> coeffs);

    int n_max() const { return n_max_; }
    Complex coeff(int k) const { return coeffs_[static_cast<std::size_t>(k + n_max_)]; }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

  private:
    int n_max_;
    std::vector<Complex> coeffs_;
};

// Inverse DFT of samples taken at x_j = 2 pi j / (2n+1), j = 1..2n+1. Exact
// when the sampled function has at most n harmonics.
FourierSpectrum fourier_coefficients(const std::vector<double>& samples);

std::vector<double> fourier_sample_points(int harmonics);

// Generalized parameter-shift rule, exact for <= `harmonics` harmonics;
// consumes exactly 2*harmonics oracle evaluations.
double psr_gradient_general(const CostOracle& oracle, const RVec& theta, int j, int harmonics);

// Two-sample rule for single-harmonic slices; 2 oracle evaluations.
double psr_gradient_two_point(const CostOracle& oracle, const RVec& theta, int j);

enum class StationaryKind { Minimum, Maximum, Saddle };

struct StationaryPoint {
    double x;
    double value;
    StationaryKind kind;
};

struct StationarySet {
    std::vector<StationaryPoint> points;
    bool constant = false;
};

// Roots of f' on the unit circle via the associated degree-2n polynomial,
// classified by the sign of f''.
StationarySet stationary_points(const FourierSpectrum& s, double circle_tol = 1e-6);

// All complex roots of sum_k coeffs[k] z^k (ascending powers) by
// Aberth-Ehrlich simultaneous iteration.
std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs);

void write_spectrum_csv(std::ostream& os, const FourierSpectrum& s);

}  // namespace fockopt
