#include "fockopt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fockopt/util.hpp"

namespace fockopt {

namespace {

int dvps_parity(int n) { return n & 1; }

}  // namespace

FockState evolve_fock(const ParametrizedCircuit& c, const RVec& theta, const Occupation& input,
                      Statistics s) {
    c.validate();
    if (input.modes() != c.modes) throw std::invalid_argument("evolve_fock: input mode count mismatch");
    if (s == Statistics::Fermion && !input.exclusion_ok())
        throw std::invalid_argument("evolve_fock: fermion input violates exclusion");

    FockState state;
    state.modes = c.modes;
    state.particles = input.total();
    state.stats = s;
    state.basis = enumerate_basis(c.modes, input.total(), s);

    state.amplitudes = CVec::Zero(static_cast<Eigen::Index>(state.basis.size()));
    state.amplitudes[static_cast<Eigen::Index>(basis_index(state.basis, input))] = 1.0;

    CMat pending = CMat::Identity(c.modes, c.modes);
    bool pending_nontrivial = false;
    auto flush = [&]() {
        if (!pending_nontrivial) return;
        const FockOperator op = lift_linear_unitary(pending, state.particles, s);
        state.amplitudes = op.matrix * state.amplitudes;
        pending = CMat::Identity(c.modes, c.modes);
        pending_nontrivial = false;
    };

    for (const auto& e : c.elements) {
        if (is_linear_element(e)) {
            pending = element_unitary(e, theta, c.modes) * pending;
            pending_nontrivial = true;
            continue;
        }
        flush();
        if (const auto* dv = std::get_if<DvpsShifter>(&e)) {
            const double x = theta[dv->param];
            const int mode = dv->mode;
            for (std::size_t i = 0; i < state.basis.size(); ++i)
                state.amplitudes[static_cast<Eigen::Index>(i)] *=
                    std::exp(Complex(0.0, dvps_parity(state.basis[i][mode]) * x));
        } else if (const auto* k = std::get_if<KerrCoupler>(&e)) {
            for (std::size_t i = 0; i < state.basis.size(); ++i)
                state.amplitudes[static_cast<Eigen::Index>(i)] *=
                    std::exp(Complex(0.0, k->phase * state.basis[i][k->mode_a] * state.basis[i][k->mode_b]));
        }
    }
    flush();

    if (std::abs(state.amplitudes.norm() - 1.0) > kNormTol)
        throw std::runtime_error("evolve_fock: norm drifted beyond tolerance");
    return state;
}

double OutputDistribution::total() const {
    double t = 0.0;
    for (const auto& [occ, p] : probabilities) t += p;
    return t;
}

OutputDistribution exact_distribution(const FockState& state) {
    OutputDistribution d;
    d.modes = state.modes;
    d.particles = state.particles;
    d.stats = state.stats;
    for (std::size_t i = 0; i < state.basis.size(); ++i)
        d.probabilities[state.basis[i]] = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
    if (std::abs(d.total() - 1.0) > kNormTol)
        throw std::invalid_argument("exact_distribution: state is not normalized");
    return d;
}

std::map<Occupation, std::int64_t> sample_shots(const OutputDistribution& d, std::int64_t shots,
                                                Rng& rng) {
    if (shots < 1) throw std::invalid_argument("sample_shots: shots must be positive");
    std::vector<const Occupation*> support;
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& [occ, p] : d.probabilities) {
        acc += p;
        support.push_back(&occ);
        cdf.push_back(acc);
    }
    if (support.empty()) throw std::invalid_argument("sample_shots: empty distribution");

    std::map<Occupation, std::int64_t> counts;
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                                      support.size() - 1);
        ++counts[*support[idx]];
    }
    return counts;
}

std::map<BitString, double> threshold_map(const OutputDistribution& d) {
    std::map<BitString, double> out;
    for (const auto& [occ, p] : d.probabilities) out[threshold_bits(occ)] += p;
    return out;
}

std::map<BitString, double> marginal_top_modes(const OutputDistribution& d, int k) {
    if (k < 1 || k > d.modes) throw std::invalid_argument("marginal_top_modes: bad mode count");
    std::map<BitString, double> out;
    for (const auto& [occ, p] : d.probabilities) {
        BitString bits = threshold_bits(occ);
        bits.resize(static_cast<std::size_t>(k));
        out[bits] += p;
    }
    return out;
}

std::map<BitString, double> photonic_fermion_distribution(const CMat& u, int fermions) {
    const int modes = static_cast<int>(u.rows());
    if (fermions > modes) throw std::invalid_argument("photonic_fermion_distribution: n exceeds modes");
    if (!is_unitary(u)) throw std::invalid_argument("photonic_fermion_distribution: matrix not unitary");

    std::vector<int> in_counts(static_cast<std::size_t>(modes), 0);
    for (int i = 0; i < fermions; ++i) in_counts[static_cast<std::size_t>(i)] = 1;
    const Occupation input(in_counts);

    std::map<BitString, double> out;
    for (const auto& m : enumerate_basis(modes, fermions, Statistics::Fermion)) {
        const Complex a = transition_amplitude(u, input, m, Statistics::Fermion);
        out[threshold_bits(m)] = std::norm(a);
    }
    return out;
}

std::map<BitString, double> photonic_fermion_distribution_resource(const CMat& u, int fermions) {
    const int modes = static_cast<int>(u.rows());
    if (fermions > modes) throw std::invalid_argument("photonic_fermion_distribution: n exceeds modes");
    const int n = fermions;

    // Amplitude tensor over mode tuples (k_1,...,k_n), one photon per copy.
    std::size_t size = 1;
    for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(modes);
    std::vector<Complex> psi(size, Complex(0.0));

    // Antisymmetrized input: amplitude sgn(sigma)/sqrt(n!) on permutations of (0..n-1).
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    const double norm = 1.0 / std::sqrt(factorial(n));
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
        std::size_t idx = 0;
        for (int c = 0; c < n; ++c) idx = idx * static_cast<std::size_t>(modes) +
                                          static_cast<std::size_t>(perm[static_cast<std::size_t>(c)]);
        psi[idx] = (inversions & 1) ? -norm : norm;
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Each copy evolves by u independently: contract u into one tensor leg at a time.
    std::vector<Complex> next(size);
    std::size_t stride = size / static_cast<std::size_t>(modes);
    for (int copy = 0; copy < n; ++copy) {
        std::fill(next.begin(), next.end(), Complex(0.0));
        for (std::size_t base = 0; base < size; ++base) {
            const int leg = static_cast<int>((base / stride) % static_cast<std::size_t>(modes));
            Complex acc = 0.0;
            const std::size_t lo = base % stride;
            const std::size_t hi = (base / (stride * static_cast<std::size_t>(modes))) *
                                   (stride * static_cast<std::size_t>(modes));
            for (int j = 0; j < modes; ++j)
                acc += u(leg, j) * psi[hi + static_cast<std::size_t>(j) * stride + lo];
            next[base] = acc;
        }
        psi.swap(next);
        stride /= static_cast<std::size_t>(modes);
    }

    // Superimpose: OR the per-copy outcomes into one bit string.
    std::map<BitString, double> out;
    for (std::size_t idx = 0; idx < size; ++idx) {
        const double p = std::norm(psi[idx]);
        BitString bits(static_cast<std::size_t>(modes), 0);
        std::size_t rem = idx;
        for (int c = n - 1; c >= 0; --c) {
            bits[rem % static_cast<std::size_t>(modes)] = 1;
            rem /= static_cast<std::size_t>(modes);
        }
        out[bits] += p;
    }
    return out;
}

namespace {

std::string occ_key(const Occupation& occ) {
    std::string s;
    for (int i = 0; i < occ.modes(); ++i) {
        if (i) s += ' ';
        s += std::to_string(occ[i]);
    }
    return s;
}

std::string bits_key(const BitString& bits) {
    std::string s;
    for (int b : bits) s += b ? '1' : '0';
    return s;
}

}  // namespace

void write_distribution_csv(std::ostream& os, const OutputDistribution& d) {
    os << "occupation,probability\n";
    for (const auto& [occ, p] : d.probabilities) os << occ_key(occ) << ',' << format_double(p) << '\n';
}

void write_counts_csv(std::ostream& os, const std::map<Occupation, std::int64_t>& counts) {
    os << "occupation,count\n";
    for (const auto& [occ, c] : counts) os << occ_key(occ) << ',' << c << '\n';
}

void write_bitstring_csv(std::ostream& os, const std::map<BitString, double>& d) {
    os << "bitstring,probability\n";
    for (const auto& [bits, p] : d) os << bits_key(bits) << ',' << format_double(p) << '\n';
}

}  // namespace fockopt
