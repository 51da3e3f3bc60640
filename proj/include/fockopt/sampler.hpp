#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "fockopt/circuit.hpp"
#include "fockopt/fock.hpp"
#include "fockopt/rng.hpp"

namespace fockopt {

struct FockState {
    int modes = 0;
    int particles = 0;
    Statistics stats = Statistics::Boson;
    std::vector<Occupation> basis;
    CVec amplitudes;
};

// Applies the circuit's elements in order. Runs of linear elements are
// composed in mode space and lifted once; DVPS/Kerr apply as lifted
// diagonal gates.
FockState evolve_fock(const ParametrizedCircuit& c, const RVec& theta, const Occupation& input,
                      Statistics s);

struct OutputDistribution {
    int modes = 0;
    int particles = 0;
    Statistics stats = Statistics::Boson;
    std::map<Occupation, double> probabilities;

    double total() const;
};

OutputDistribution exact_distribution(const FockState& state);

// Multinomial draw via inverse CDF over the sorted support; counts sum to shots.
std::map<Occupation, std::int64_t> sample_shots(const OutputDistribution& d, std::int64_t shots,
                                                Rng& rng);

// Pushes occupations through the threshold detector bit map, Theta(0) = 0,
// merging collisions by probability sum.
std::map<BitString, double> threshold_map(const OutputDistribution& d);

// Threshold map marginalized onto the first k modes.
std::map<BitString, double> marginal_top_modes(const OutputDistribution& d, int k);

// Fermion sampling of n particles in the first n modes of u, as bit-string
// probabilities p(m) = |det u[m|n]|^2.
std::map<BitString, double> photonic_fermion_distribution(const CMat& u, int fermions);

// Same distribution through the entangled n-copy photonic resource state:
// evolve each copy by u, superimpose single-photon patterns. Test oracle for
// the determinant path.
std::map<BitString, double> photonic_fermion_distribution_resource(const CMat& u, int fermions);

void write_distribution_csv(std::ostream& os, const OutputDistribution& d);
void write_counts_csv(std::ostream& os, const std::map<Occupation, std::int64_t>& counts);
void write_bitstring_csv(std::ostream& os, const std::map<BitString, double>& d);

}  // namespace fockopt
