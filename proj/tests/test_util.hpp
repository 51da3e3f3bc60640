#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fockopt/fock.hpp"
#include "fockopt/landscape.hpp"
#include "fockopt/rng.hpp"
#include "fockopt/types.hpp"

namespace testutil {

using fockopt::CMat;
using fockopt::Complex;

// Brute-force permutation-sum permanent, the d! oracle.
inline Complex permanent_naive(const CMat& a) {
    const int d = static_cast<int>(a.rows());
    if (d == 0) return 1.0;
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum = 0.0;
    do {
        Complex prod = 1.0;
        for (int i = 0; i < d; ++i) prod *= a(i, perm[static_cast<std::size_t>(i)]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

inline CMat random_complex(int rows, int cols, fockopt::Rng& rng) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return m;
}

// QR-based random unitary, independent of the circuit module's sampler.
inline CMat random_unitary(int dim, fockopt::Rng& rng) {
    CMat z(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) z(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

inline double central_difference(const fockopt::CostOracle& oracle, fockopt::RVec theta, int j,
                                 double h = 1e-5) {
    const double x = theta[j];
    theta[j] = x + h;
    const double plus = oracle.probe(theta);
    theta[j] = x - h;
    const double minus = oracle.probe(theta);
    return (plus - minus) / (2.0 * h);
}

inline double grid_minimum(const std::function<double(double)>& f, int points = 1000) {
    double best = f(0.0);
    for (int i = 1; i < points; ++i)
        best = std::min(best, f(2.0 * std::numbers::pi * i / points));
    return best;
}

// Asymptotic Kolmogorov-Smirnov p-value for uniformity on [lo, hi].
inline double ks_uniform_pvalue(std::vector<double> samples, double lo, double hi) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = (samples[i] - lo) / (hi - lo);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) p += 2.0 * ((k & 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace testutil
