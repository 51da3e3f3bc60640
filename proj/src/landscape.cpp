#include "fockopt/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fockopt/util.hpp"

namespace fockopt {

using std::numbers::pi;

std::vector<std::pair<double, double>> slice(const CostOracle& oracle, RVec theta, int j,
                                             const std::vector<double>& xs) {
    if (j < 0 || j >= oracle.num_params()) throw std::invalid_argument("slice: coordinate out of range");
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (double x : xs) {
        theta[j] = x;
        out.emplace_back(x, oracle.eval(theta));
    }
    return out;
}

FourierSpectrum::FourierSpectrum(int n_max, std::vector<Complex> coeffs)
    : n_max_(n_max), coeffs_(std::move(coeffs)) {
    if (n_max_ < 0 || coeffs_.size() != static_cast<std::size_t>(2 * n_max_ + 1))
        throw std::invalid_argument("FourierSpectrum: coefficient count mismatch");
}

double FourierSpectrum::value(double x) const {
    Complex acc = 0.0;
    for (int k = -n_max_; k <= n_max_; ++k) acc += coeff(k) * std::exp(Complex(0.0, k * x));
    return acc.real();
}

double FourierSpectrum::derivative(double x) const {
    Complex acc = 0.0;
    for (int k = -n_max_; k <= n_max_; ++k)
        acc += Complex(0.0, k) * coeff(k) * std::exp(Complex(0.0, k * x));
    return acc.real();
}

double FourierSpectrum::second_derivative(double x) const {
    Complex acc = 0.0;
    for (int k = -n_max_; k <= n_max_; ++k)
        acc += -static_cast<double>(k) * k * coeff(k) * std::exp(Complex(0.0, k * x));
    return acc.real();
}

std::vector<double> fourier_sample_points(int harmonics) {
    const int count = 2 * harmonics + 1;
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j)
        xs[static_cast<std::size_t>(j - 1)] = 2.0 * pi * j / count;
    return xs;
}

FourierSpectrum fourier_coefficients(const std::vector<double>& samples) {
    if (samples.empty() || samples.size() % 2 == 0)
        throw std::invalid_argument("fourier_coefficients: needs an odd sample count 2n+1");
    const int count = static_cast<int>(samples.size());
    const int n = (count - 1) / 2;
    std::vector<Complex> coeffs(static_cast<std::size_t>(count));
    for (int k = -n; k <= n; ++k) {
        Complex acc = 0.0;
        for (int j = 1; j <= count; ++j) {
            const double x = 2.0 * pi * j / count;
            acc += samples[static_cast<std::size_t>(j - 1)] * std::exp(Complex(0.0, -k * x));
        }
        coeffs[static_cast<std::size_t>(k + n)] = acc / static_cast<double>(count);
    }
    return FourierSpectrum(n, std::move(coeffs));
}

double psr_gradient_general(const CostOracle& oracle, const RVec& theta, int j, int harmonics) {
    if (harmonics < 1) throw std::invalid_argument("psr_gradient_general: needs at least one harmonic");
    if (j < 0 || j >= oracle.num_params())
        throw std::invalid_argument("psr_gradient_general: coordinate out of range");
    RVec shifted = theta;
    double grad = 0.0;
    for (int k = 1; k <= 2 * harmonics; ++k) {
        const double xk = (2.0 * k - 1.0) * pi / (2.0 * harmonics);
        shifted[j] = theta[j] + xk;
        const double s = std::sin(xk / 2.0);
        const double w = ((k & 1) ? 1.0 : -1.0) / (4.0 * harmonics * s * s);
        grad += w * oracle.eval(shifted);
    }
    return grad;
}

double psr_gradient_two_point(const CostOracle& oracle, const RVec& theta, int j) {
    if (j < 0 || j >= oracle.num_params())
        throw std::invalid_argument("psr_gradient_two_point: coordinate out of range");
    RVec shifted = theta;
    shifted[j] = theta[j] + pi / 2.0;
    const double plus = oracle.eval(shifted);
    shifted[j] = theta[j] - pi / 2.0;
    const double minus = oracle.eval(shifted);
    return 0.5 * (plus - minus);
}

namespace {

Complex poly_eval(const std::vector<Complex>& c, Complex z) {
    Complex acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

Complex poly_deriv_eval(const std::vector<Complex>& c, Complex z) {
    Complex acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * c[i];
    return acc;
}

}  // namespace

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};

    // Factor out roots at the origin.
    std::size_t zero_roots = 0;
    while (zero_roots + 1 < coeffs.size() && std::abs(coeffs[zero_roots]) == 0.0) ++zero_roots;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(zero_roots));

    const std::size_t degree = coeffs.size() - 1;
    std::vector<Complex> roots(degree + zero_roots, Complex(0.0));
    if (degree == 0) return roots;

    double cauchy = 0.0;
    for (std::size_t i = 0; i < degree; ++i)
        cauchy = std::max(cauchy, std::abs(coeffs[i] / coeffs[degree]));
    const double radius = std::min(1.0 + cauchy, 1.0 + std::pow(std::abs(coeffs[0] / coeffs[degree]),
                                                                1.0 / static_cast<double>(degree)));

    // Aberth-Ehrlich simultaneous iteration from a circle of staggered angles.
    std::vector<Complex> z(degree);
    for (std::size_t k = 0; k < degree; ++k) {
        const double ang = 2.0 * pi * static_cast<double>(k) / static_cast<double>(degree) + 0.43;
        z[k] = radius * std::exp(Complex(0.0, ang));
    }
    for (int iter = 0; iter < 200; ++iter) {
        double worst = 0.0;
        for (std::size_t k = 0; k < degree; ++k) {
            const Complex p = poly_eval(coeffs, z[k]);
            const Complex dp = poly_deriv_eval(coeffs, z[k]);
            Complex w = dp != Complex(0.0) ? p / dp : Complex(1e-12, 0.0);
            Complex sum = 0.0;
            for (std::size_t j = 0; j < degree; ++j)
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            const Complex denom = 1.0 - w * sum;
            const Complex step = denom != Complex(0.0) ? w / denom : w;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-12) break;
    }
    std::copy(z.begin(), z.end(), roots.begin() + static_cast<std::ptrdiff_t>(zero_roots));
    return roots;
}

StationarySet stationary_points(const FourierSpectrum& s, double circle_tol) {
    const int n = s.n_max();
    if (n < 1) throw std::invalid_argument("stationary_points: spectrum needs n_max >= 1");

    double scale = 0.0;
    for (int k = -n; k <= n; ++k) scale = std::max(scale, std::abs(s.coeff(k)));
    std::vector<Complex> poly(static_cast<std::size_t>(2 * n + 1));
    double dscale = 0.0;
    for (int k = -n; k <= n; ++k) {
        const Complex d = Complex(0.0, k) * s.coeff(k);
        poly[static_cast<std::size_t>(k + n)] = d;
        dscale = std::max(dscale, std::abs(d));
    }
    StationarySet out;
    if (dscale <= 1e-14 * std::max(1.0, scale)) {
        out.constant = true;
        return out;
    }

    for (const Complex& root : polynomial_roots(std::move(poly))) {
        if (std::abs(std::abs(root) - 1.0) >= circle_tol) continue;
        const double x = std::arg(root);
        const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const StationaryPoint& p) {
            const double d = std::remainder(p.x - x, 2.0 * pi);
            return std::abs(d) < 1e-9;
        });
        if (dup) continue;
        const double f2 = s.second_derivative(x);
        StationaryKind kind = StationaryKind::Saddle;
        if (f2 > 1e-9)
            kind = StationaryKind::Minimum;
        else if (f2 < -1e-9)
            kind = StationaryKind::Maximum;
        out.points.push_back({x, s.value(x), kind});
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const StationaryPoint& a, const StationaryPoint& b) { return a.x < b.x; });
    return out;
}

void write_spectrum_csv(std::ostream& os, const FourierSpectrum& s) {
    os << "k,re_ck,im_ck,abs_ck\n";
    for (int k = -s.n_max(); k <= s.n_max(); ++k) {
        const Complex c = s.coeff(k);
        os << k << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << ','
           << format_double(std::abs(c)) << '\n';
    }
}

}  // namespace fockopt
