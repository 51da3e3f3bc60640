#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fockopt/types.hpp"

namespace fockopt {

// Per-mode particle counts labelling a Fock basis state. Comparison is
// plain lexicographic on the counts.
class Occupation {
  public:
    Occupation() = default;
    explicit Occupation(std::vector<int> counts);

    int modes() const { return static_cast<int>(counts_.size()); }
    int total() const { return total_; }
    int operator[](int mode) const { return counts_[static_cast<std::size_t>(mode)]; }
    const std::vector<int>& counts() const { return counts_; }

    bool exclusion_ok() const;  // no count above 1

    friend bool operator==(const Occupation& a, const Occupation& b) { return a.counts_ == b.counts_; }
    friend auto operator<=>(const Occupation& a, const Occupation& b) { return a.counts_ <=> b.counts_; }

  private:
    std::vector<int> counts_;
    int total_ = 0;
};

BitString threshold_bits(const Occupation& occ);

// Exact for n <= 20, log-gamma based above.
double factorial(int n);

std::int64_t basis_dimension(int modes, int particles, Statistics s);

// Complete duplicate-free basis of the (modes, particles) subspace, ordered
// lexicographically with the first mode's count descending first.
std::vector<Occupation> enumerate_basis(int modes, int particles, Statistics s);

// Binary search respecting the descending basis order above.
std::size_t basis_index(const std::vector<Occupation>& basis, const Occupation& state);

// Ryser's formula with Gray-code row-sum updates, O(2^d d).
Complex permanent(const CMat& a);

// Partial-pivot LU, O(d^3). Empty matrix gives 1.
Complex determinant(const CMat& a);

// u[m|n]: row i of u repeated m_i times, column j repeated n_j times,
// ascending mode order.
CMat index_submatrix(const CMat& u, const Occupation& m, const Occupation& n);

// <m|U|n> = per/det(u[m|n]) / sqrt(m! n!) for bosons/fermions.
Complex transition_amplitude(const CMat& u, const Occupation& n, const Occupation& m, Statistics s);

struct FockOperator {
    std::vector<Occupation> basis;
    CMat matrix;

    std::int64_t dim() const { return matrix.rows(); }
};

// Fock-space representation of the mode unitary u on the n-particle subspace.
FockOperator lift_linear_unitary(const CMat& u, int particles, Statistics s);

// Diagonal unitary exp(i * phase(state)) over the given basis.
FockOperator lift_diagonal_gate(const std::function<double(const Occupation&)>& phase,
                                std::vector<Occupation> basis);

}  // namespace fockopt
