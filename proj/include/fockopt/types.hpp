#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace fockopt {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Detector-side bit pattern, one entry in {0,1} per mode.
using BitString = std::vector<int>;

enum class Statistics { Boson, Fermion };

// Shared numerical tolerances.
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-9;

// Thrown when a non-linear element reaches a mode-space-only code path.
struct UnsupportedElementError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a constrained synthesis finds no feasible solution.
struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& what, double residual)
        : std::runtime_error(what), best_residual(residual) {}
    double best_residual;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_unitary(const CMat& u, double tol = kUnitaryTol) {
    if (u.rows() != u.cols()) return false;
    CMat g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace fockopt
