#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "fockopt/oracles.hpp"
#include "fockopt/sampler.hpp"
#include "test_util.hpp"

using namespace fockopt;
using std::numbers::pi;

namespace {

Occupation occ(std::vector<int> v) { return Occupation(std::move(v)); }

ParametrizedCircuit hadamard_circuit() {
    ParametrizedCircuit c;
    c.modes = 2;
    c.elements = {Element{BeamSplitter5050{0, 1, BsConvention::Hadamard}}};
    return c;
}

}  // namespace

TEST_CASE("evolving an empty circuit returns the input basis vector") {
    ParametrizedCircuit c;
    c.modes = 3;
    const FockState s = evolve_fock(c, RVec(), occ({1, 0, 1}), Statistics::Boson);
    const OutputDistribution d = exact_distribution(s);
    CHECK(d.probabilities.at(occ({1, 0, 1})) == doctest::Approx(1.0));
    CHECK(d.total() == doctest::Approx(1.0));
}

TEST_CASE("Hong-Ou-Mandel for bosons and fermions") {
    const auto c = hadamard_circuit();

    const OutputDistribution boson =
        exact_distribution(evolve_fock(c, RVec(), occ({1, 1}), Statistics::Boson));
    CHECK(boson.probabilities.at(occ({2, 0})) == doctest::Approx(0.5));
    CHECK(boson.probabilities.at(occ({0, 2})) == doctest::Approx(0.5));
    CHECK(boson.probabilities.at(occ({1, 1})) == doctest::Approx(0.0));

    const OutputDistribution fermion =
        exact_distribution(evolve_fock(c, RVec(), occ({1, 1}), Statistics::Fermion));
    CHECK(fermion.probabilities.at(occ({1, 1})) == doctest::Approx(1.0));

    CHECK_THROWS_AS(evolve_fock(c, RVec(), occ({2, 0}), Statistics::Fermion), std::invalid_argument);
}

TEST_CASE("non-linear elements act as lifted diagonal gates") {
    // Kerr pi on (1,1) flips the sign of that amplitude relative to a plain BS
    ParametrizedCircuit c;
    c.modes = 2;
    c.num_params = 1;
    c.elements = {Element{BeamSplitter5050{0, 1}}, Element{KerrCoupler{0, 1, pi}},
                  Element{BeamSplitter5050{0, 1}}};
    RVec theta(1);
    theta[0] = 0.0;
    const FockState s = evolve_fock(c, theta, occ({1, 1}), Statistics::Boson);
    CHECK(std::abs(s.amplitudes.norm() - 1.0) < 1e-12);

    // DVPS with x = pi on one photon equals a pi phase shifter
    ParametrizedCircuit dv;
    dv.modes = 2;
    dv.num_params = 1;
    dv.elements = {Element{BeamSplitter5050{0, 1}}, Element{DvpsShifter{0, 0}},
                   Element{BeamSplitter5050{0, 1}}};
    RVec x(1);
    x[0] = pi;
    const FockState sd = evolve_fock(dv, x, occ({1, 0}), Statistics::Boson);
    const OutputDistribution dd = exact_distribution(sd);
    // H diag(-1,1) H |10> = |01>
    CHECK(dd.probabilities.at(occ({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("shot sampling is multinomial, seeded, and exact on point masses") {
    const auto c = hadamard_circuit();
    const OutputDistribution hom =
        exact_distribution(evolve_fock(c, RVec(), occ({1, 1}), Statistics::Boson));

    Rng rng(77);
    const auto counts = sample_shots(hom, 1000000, rng);
    std::int64_t total = 0;
    for (const auto& [o, n] : counts) total += n;
    CHECK(total == 1000000);
    const double freq = static_cast<double>(counts.at(occ({2, 0}))) / 1e6;
    CHECK(std::abs(freq - 0.5) < 0.002);  // 3 sigma at binomial sd 0.0005

    OutputDistribution point;
    point.modes = 2;
    point.particles = 1;
    point.probabilities[occ({1, 0})] = 1.0;
    Rng rng2(1);
    const auto pc = sample_shots(point, 100, rng2);
    CHECK(pc.at(occ({1, 0})) == 100);

    Rng rng3(2);
    const auto one = sample_shots(hom, 1, rng3);
    std::int64_t total_one = 0;
    for (const auto& [o, n] : one) total_one += n;
    CHECK(total_one == 1);

    // determinism
    Rng a(5), b(5);
    CHECK(sample_shots(hom, 1000, a) == sample_shots(hom, 1000, b));
}

TEST_CASE("threshold mapping merges occupations and preserves mass") {
    OutputDistribution d;
    d.modes = 2;
    d.particles = 2;
    d.probabilities[occ({2, 0})] = 0.5;
    d.probabilities[occ({0, 2})] = 0.5;
    const auto bits = threshold_map(d);
    CHECK(bits.at(BitString{1, 0}) == doctest::Approx(0.5));
    CHECK(bits.at(BitString{0, 1}) == doctest::Approx(0.5));

    OutputDistribution m;
    m.modes = 2;
    m.particles = 2;
    m.probabilities[occ({1, 1})] = 0.25;
    m.probabilities[occ({2, 0})] = 0.75;
    const auto mb = threshold_map(m);
    CHECK(mb.at(BitString{1, 1}) == doctest::Approx(0.25));
    CHECK(mb.at(BitString{1, 0}) == doctest::Approx(0.75));

    double mass = 0.0;
    for (const auto& [b, p] : mb) mass += p;
    CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("fermion threshold map is injective on the support") {
    Rng rng(3);
    const CMat u = testutil::random_unitary(4, rng);
    ParametrizedCircuit c;
    c.modes = 4;
    c.elements = {Element{FixedUnitary{u, 0}}};
    const OutputDistribution d =
        exact_distribution(evolve_fock(c, RVec(), occ({1, 1, 0, 0}), Statistics::Fermion));
    const auto bits = threshold_map(d);
    CHECK(bits.size() == d.probabilities.size());
}

TEST_CASE("marginal over the top modes") {
    OutputDistribution d;
    d.modes = 4;
    d.particles = 3;
    d.probabilities[occ({1, 0, 1, 1})] = 1.0;
    const auto top2 = marginal_top_modes(d, 2);
    CHECK(top2.at(BitString{1, 0}) == doctest::Approx(1.0));

    OutputDistribution u;
    u.modes = 4;
    u.particles = 1;
    u.probabilities[occ({1, 0, 0, 0})] = 0.25;
    u.probabilities[occ({0, 1, 0, 0})] = 0.25;
    u.probabilities[occ({0, 0, 1, 0})] = 0.25;
    u.probabilities[occ({0, 0, 0, 1})] = 0.25;
    const auto m = marginal_top_modes(u, 2);
    CHECK(m.at(BitString{1, 0}) == doctest::Approx(0.25));
    CHECK(m.at(BitString{0, 1}) == doctest::Approx(0.25));
    CHECK(m.at(BitString{0, 0}) == doctest::Approx(0.5));

    CHECK_THROWS_AS(marginal_top_modes(d, 0), std::invalid_argument);
}

TEST_CASE("photonic fermion sampling: determinant path on closed forms") {
    CMat u = CMat::Identity(2, 2);
    u.block(0, 0, 2, 2) << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
        -1.0 / std::sqrt(2.0);
    const auto d = photonic_fermion_distribution(u, 2);
    CHECK(d.at(BitString{1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("resource-state path matches the determinant path") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int modes = rng.uniform_int(2, 5);
        const int n = rng.uniform_int(2, std::min(3, modes));
        const CMat u = testutil::random_unitary(modes, rng);
        const auto det_path = photonic_fermion_distribution(u, n);
        const auto res_path = photonic_fermion_distribution_resource(u, n);
        for (const auto& [bits, p] : det_path) {
            const auto it = res_path.find(bits);
            const double q = it == res_path.end() ? 0.0 : it->second;
            CHECK(std::abs(p - q) < 1e-10);
        }
        // collision patterns (weight < n) carry no probability
        for (const auto& [bits, p] : res_path) {
            int w = 0;
            for (int b : bits) w += b;
            if (w < n) CHECK(p < 1e-20);
        }
    }
}

TEST_CASE("two-fermion resource state is the antisymmetric Bell pair") {
    // With u = I the resource path must return the input pattern (1,1,0,..)
    const CMat eye = CMat::Identity(3, 3);
    const auto d = photonic_fermion_distribution_resource(eye, 2);
    CHECK(d.at(BitString{1, 1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("distribution CSV export") {
    OutputDistribution d;
    d.modes = 2;
    d.particles = 1;
    d.probabilities[occ({1, 0})] = 0.5;
    d.probabilities[occ({0, 1})] = 0.5;
    std::ostringstream os;
    write_distribution_csv(os, d);
    CHECK(os.str() == "occupation,probability\n0 1,0.5\n1 0,0.5\n");
}
