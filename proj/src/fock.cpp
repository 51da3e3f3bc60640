#include "fockopt/fock.hpp"
#include <algorithm>

#include <bit>
#include <cmath>
#include <numeric>

namespace fockopt {

Occupation::Occupation(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
        if (c < 0) throw std::invalid_argument("Occupation: negative count");
        total_ += c;
    }
}

bool Occupation::exclusion_ok() const {
    for (int c : counts_)
        if (c > 1) return false;
    return true;
}

BitString threshold_bits(const Occupation& occ) {
    BitString bits(static_cast<std::size_t>(occ.modes()));
    for (int i = 0; i < occ.modes(); ++i) bits[static_cast<std::size_t>(i)] = occ[i] > 0 ? 1 : 0;
    return bits;
}

double factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    if (n <= 20) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
}

namespace {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

std::int64_t basis_dimension(int modes, int particles, Statistics s) {
    if (modes < 1 || particles < 0) throw std::invalid_argument("basis_dimension: bad shape");
    if (s == Statistics::Fermion) {
        if (particles > modes) throw std::invalid_argument("basis_dimension: fermion count exceeds modes");
        return binomial(modes, particles);
    }
    return binomial(modes + particles - 1, particles);
}

std::vector<Occupation> enumerate_basis(int modes, int particles, Statistics s) {
    if (modes < 1 || particles < 0) throw std::invalid_argument("enumerate_basis: bad shape");
    if (s == Statistics::Fermion && particles > modes)
        throw std::invalid_argument("enumerate_basis: fermion count exceeds modes");

    std::vector<Occupation> basis;
    basis.reserve(static_cast<std::size_t>(basis_dimension(modes, particles, s)));
    std::vector<int> counts(static_cast<std::size_t>(modes), 0);

    const int cap = s == Statistics::Fermion ? 1 : particles;
    auto rec = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            if (remaining > cap) return;
            counts[static_cast<std::size_t>(mode)] = remaining;
            basis.emplace_back(counts);
            return;
        }
        for (int c = std::min(cap, remaining); c >= 0; --c) {
            counts[static_cast<std::size_t>(mode)] = c;
            self(self, mode + 1, remaining - c);
        }
    };
    rec(rec, 0, particles);
    return basis;
}

std::size_t basis_index(const std::vector<Occupation>& basis, const Occupation& state) {
    const auto it = std::lower_bound(basis.begin(), basis.end(), state,
                                     [](const Occupation& a, const Occupation& b) { return a > b; });
    if (it == basis.end() || !(*it == state))
        throw std::invalid_argument("basis_index: state not in basis");
    return static_cast<std::size_t>(it - basis.begin());
}

Complex permanent(const CMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("permanent: non-square matrix");
    const int d = static_cast<int>(a.rows());
    if (d == 0) return 1.0;
    if (d == 1) return a(0, 0);
    if (d == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
    if (d == 3)
        return a(0, 0) * (a(1, 1) * a(2, 2) + a(1, 2) * a(2, 1)) +
               a(0, 1) * (a(1, 0) * a(2, 2) + a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) + a(1, 1) * a(2, 0));
    if (d > 62) throw std::invalid_argument("permanent: dimension too large for Ryser");

    // per(A) = (-1)^d sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij
    std::vector<Complex> rowsum(static_cast<std::size_t>(d), Complex(0.0));
    Complex acc = 0.0;
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < (1ull << d); ++k) {
        const std::uint64_t g = k ^ (k >> 1);
        const std::uint64_t changed = g ^ gray;
        const int j = std::countr_zero(changed);
        const double dir = (g & changed) ? 1.0 : -1.0;
        for (int i = 0; i < d; ++i) rowsum[static_cast<std::size_t>(i)] += dir * a(i, j);
        gray = g;

        Complex prod = 1.0;
        for (int i = 0; i < d; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
        acc += (std::popcount(g) & 1) ? -prod : prod;
    }
    return (d & 1) ? -acc : acc;
}

Complex determinant(const CMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: non-square matrix");
    const int d = static_cast<int>(a.rows());
    if (d == 0) return 1.0;
    if (d == 1) return a(0, 0);
    if (d == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (d == 3)
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    return Eigen::PartialPivLU<CMat>(a).determinant();
}

CMat index_submatrix(const CMat& u, const Occupation& m, const Occupation& n) {
    if (u.rows() != u.cols()) throw std::invalid_argument("index_submatrix: non-square matrix");
    if (m.modes() != u.rows() || n.modes() != u.rows())
        throw std::invalid_argument("index_submatrix: occupation length mismatch");
    if (m.total() != n.total()) throw std::invalid_argument("index_submatrix: particle totals differ");

    std::vector<int> rows, cols;
    rows.reserve(static_cast<std::size_t>(m.total()));
    cols.reserve(static_cast<std::size_t>(n.total()));
    for (int i = 0; i < m.modes(); ++i)
        for (int r = 0; r < m[i]; ++r) rows.push_back(i);
    for (int j = 0; j < n.modes(); ++j)
        for (int r = 0; r < n[j]; ++r) cols.push_back(j);

    CMat sub(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = u(rows[i], cols[j]);
    return sub;
}

Complex transition_amplitude(const CMat& u, const Occupation& n, const Occupation& m, Statistics s) {
    if (m.total() != n.total()) throw std::invalid_argument("transition_amplitude: particle totals differ");
    if (s == Statistics::Fermion && (!m.exclusion_ok() || !n.exclusion_ok())) return 0.0;

    const CMat sub = index_submatrix(u, m, n);
    const Complex numer = s == Statistics::Boson ? permanent(sub) : determinant(sub);

    double fact = 1.0;
    for (int i = 0; i < m.modes(); ++i) fact *= factorial(m[i]);
    for (int j = 0; j < n.modes(); ++j) fact *= factorial(n[j]);
    return numer / std::sqrt(fact);
}

FockOperator lift_linear_unitary(const CMat& u, int particles, Statistics s) {
    if (!is_unitary(u)) throw std::invalid_argument("lift_linear_unitary: matrix is not unitary");
    auto basis = enumerate_basis(static_cast<int>(u.rows()), particles, s);
    const auto dim = static_cast<Eigen::Index>(basis.size());

    // Mode index lists and factorial norms per basis state, shared across
    // all matrix entries.
    std::vector<std::vector<int>> mode_idx(basis.size());
    std::vector<double> norms(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        double fact = 1.0;
        for (int m = 0; m < basis[b].modes(); ++m) {
            for (int r = 0; r < basis[b][m]; ++r) mode_idx[b].push_back(m);
            fact *= factorial(basis[b][m]);
        }
        norms[b] = std::sqrt(fact);
    }

    CMat sub(particles, particles);
    CMat mat(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto& cols = mode_idx[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto& rows = mode_idx[static_cast<std::size_t>(i)];
            for (int r = 0; r < particles; ++r)
                for (int c = 0; c < particles; ++c)
                    sub(r, c) = u(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
            const Complex numer = s == Statistics::Boson ? permanent(sub) : determinant(sub);
            mat(i, j) = numer / (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
        }
    }
    return {std::move(basis), std::move(mat)};
}

FockOperator lift_diagonal_gate(const std::function<double(const Occupation&)>& phase,
                                std::vector<Occupation> basis) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    CMat mat = CMat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        mat(i, i) = std::exp(Complex(0.0, phase(basis[static_cast<std::size_t>(i)])));
    return {std::move(basis), std::move(mat)};
}

}  // namespace fockopt
