#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "fockopt/fock.hpp"
#include "test_util.hpp"

using namespace fockopt;
using testutil::permanent_naive;

namespace {

Occupation occ(std::vector<int> v) { return Occupation(std::move(v)); }

const CMat kHadamard = [] {
    CMat h(2, 2);
    h << 1, 1, 1, -1;
    return CMat(h / std::sqrt(2.0));
}();

}  // namespace

TEST_CASE("basis enumeration matches subspace dimensions") {
    CHECK(enumerate_basis(4, 2, Statistics::Boson).size() == 10);
    CHECK(enumerate_basis(4, 2, Statistics::Fermion).size() == 6);
    CHECK(basis_dimension(4, 2, Statistics::Boson) == 10);
    CHECK(basis_dimension(4, 2, Statistics::Fermion) == 6);

    const auto vacuum = enumerate_basis(3, 0, Statistics::Boson);
    REQUIRE(vacuum.size() == 1);
    CHECK(vacuum[0] == occ({0, 0, 0}));

    CHECK_THROWS_AS(enumerate_basis(3, 4, Statistics::Fermion), std::invalid_argument);
}

TEST_CASE("basis order is lexicographic with first mode descending") {
    const auto basis = enumerate_basis(3, 2, Statistics::Boson);
    REQUIRE(basis.size() == 6);
    CHECK(basis.front() == occ({2, 0, 0}));
    CHECK(basis[1] == occ({1, 1, 0}));
    CHECK(basis.back() == occ({0, 0, 2}));
    for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1] > basis[i]);

    // no duplicates, fermion exclusion respected
    const auto fermion = enumerate_basis(4, 3, Statistics::Fermion);
    for (const auto& b : fermion) CHECK(b.exclusion_ok());
}

TEST_CASE("permanent on small closed forms") {
    CHECK(permanent(CMat::Identity(2, 2)).real() == doctest::Approx(1.0));

    CMat m(2, 2);
    m << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(-2, 1);
    const Complex expect = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    CHECK(std::abs(permanent(m) - expect) < 1e-14);

    CHECK(permanent(CMat::Ones(3, 3)).real() == doctest::Approx(6.0));
    CHECK(permanent(CMat(0, 0)) == Complex(1.0));
    CHECK_THROWS_AS(permanent(CMat::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("Ryser permanent agrees with the permutation-sum oracle") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = rng.uniform_int(1, 6);
        const CMat a = testutil::random_complex(d, d, rng);
        CHECK(std::abs(permanent(a) - permanent_naive(a)) < 1e-10);
    }
}

TEST_CASE("determinant basics") {
    CHECK(determinant(CMat::Identity(2, 2)).real() == doctest::Approx(1.0));
    CMat m(2, 2);
    m << Complex(1, 1), Complex(2, 0), Complex(0, 3), Complex(1, -1);
    const Complex expect = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    CHECK(std::abs(determinant(m) - expect) < 1e-14);

    CMat repeated(3, 3);
    repeated << 1, 2, 3, 1, 2, 3, 4, 5, 6;
    CHECK(std::abs(determinant(repeated)) < 1e-14);
    CHECK(determinant(CMat(0, 0)) == Complex(1.0));
    CHECK_THROWS_AS(determinant(CMat::Ones(1, 2)), std::invalid_argument);
}

TEST_CASE("index submatrix repeats rows and columns in mode order") {
    CMat u(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) u(i, j) = Complex(10.0 * (i + 1) + (j + 1), 0.0);

    const CMat sub = index_submatrix(u, occ({3, 1, 0}), occ({1, 1, 2}));
    REQUIRE(sub.rows() == 4);
    REQUIRE(sub.cols() == 4);
    for (int r = 0; r < 3; ++r) {
        CHECK(sub(r, 0) == u(0, 0));
        CHECK(sub(r, 1) == u(0, 1));
        CHECK(sub(r, 2) == u(0, 2));
        CHECK(sub(r, 3) == u(0, 2));
    }
    CHECK(sub(3, 0) == u(1, 0));
    CHECK(sub(3, 3) == u(1, 2));

    CHECK(index_submatrix(u, occ({1, 0, 0}), occ({1, 0, 0}))(0, 0) == u(0, 0));
    CHECK(index_submatrix(u, occ({1, 1, 1}), occ({1, 1, 1})) == u);
    CHECK_THROWS_AS(index_submatrix(u, occ({1, 0, 0}), occ({1, 1, 0})), std::invalid_argument);
}

TEST_CASE("transition amplitudes: identity and Hong-Ou-Mandel") {
    const CMat eye = CMat::Identity(3, 3);
    CHECK(std::abs(transition_amplitude(eye, occ({2, 1, 0}), occ({2, 1, 0}), Statistics::Boson) - 1.0) <
          1e-14);

    const Occupation in = occ({1, 1});
    CHECK(std::abs(transition_amplitude(kHadamard, in, occ({1, 1}), Statistics::Boson)) < 1e-14);
    CHECK(std::abs(std::abs(transition_amplitude(kHadamard, in, occ({2, 0}), Statistics::Boson)) -
                   1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(std::abs(transition_amplitude(kHadamard, in, occ({0, 2}), Statistics::Boson)) -
                   1.0 / std::sqrt(2.0)) < 1e-14);

    const Complex fermion = transition_amplitude(kHadamard, in, occ({1, 1}), Statistics::Fermion);
    CHECK(std::abs(fermion - Complex(-1.0, 0.0)) < 1e-14);

    CHECK_THROWS_AS(transition_amplitude(kHadamard, occ({1, 1}), occ({1, 0}), Statistics::Boson),
                    std::invalid_argument);
}

TEST_CASE("fermion exclusion zeroes multi-occupancy amplitudes exactly") {
    Rng rng(7);
    const CMat u = testutil::random_unitary(3, rng);
    CHECK(transition_amplitude(u, occ({1, 1, 0}), occ({2, 0, 0}), Statistics::Fermion) == Complex(0.0));
}

TEST_CASE("column norm of transition amplitudes is one") {
    Rng rng(11);
    for (const auto stats : {Statistics::Boson, Statistics::Fermion}) {
        const CMat u = testutil::random_unitary(4, rng);
        const Occupation in = occ({1, 1, 0, 0});
        double total = 0.0;
        for (const auto& m : enumerate_basis(4, 2, stats))
            total += std::norm(transition_amplitude(u, in, m, stats));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("lifted unitaries act correctly and stay unitary") {
    const FockOperator eye = lift_linear_unitary(CMat::Identity(2, 2), 2, Statistics::Boson);
    CHECK((eye.matrix - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

    const FockOperator hom = lift_linear_unitary(kHadamard, 2, Statistics::Boson);
    REQUIRE(hom.dim() == 3);
    // basis (2,0), (1,1), (0,2); input column (1,1)
    CHECK(std::abs(std::abs(hom.matrix(0, 1)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(hom.matrix(1, 1)) < 1e-12);
    CHECK(std::abs(std::abs(hom.matrix(2, 1)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(is_unitary(hom.matrix));
}

TEST_CASE("lift is a homomorphism") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int modes = rng.uniform_int(2, 4);
        const int particles = rng.uniform_int(1, std::min(3, modes));
        const auto stats = trial % 2 ? Statistics::Fermion : Statistics::Boson;
        const CMat u = testutil::random_unitary(modes, rng);
        const CMat v = testutil::random_unitary(modes, rng);
        const FockOperator lu = lift_linear_unitary(u, particles, stats);
        const FockOperator lv = lift_linear_unitary(v, particles, stats);
        const FockOperator luv = lift_linear_unitary(u * v, particles, stats);
        CHECK((luv.matrix - lu.matrix * lv.matrix).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(is_unitary(lu.matrix));
    }
}

TEST_CASE("diagonal gate lifts") {
    const auto basis = enumerate_basis(2, 2, Statistics::Boson);

    const FockOperator ident = lift_diagonal_gate([](const Occupation&) { return 0.0; }, basis);
    CHECK((ident.matrix - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    // DVPS on mode 0 with phase x: counts (2,1,0) pick up parities (0,1,0)
    const double x = 0.37;
    const FockOperator dvps = lift_diagonal_gate(
        [x](const Occupation& o) { return (o[0] % 2) * x; }, basis);
    CHECK(std::abs(dvps.matrix(0, 0) - Complex(1.0)) < 1e-15);            // (2,0)
    CHECK(std::abs(dvps.matrix(1, 1) - std::exp(Complex(0, x))) < 1e-15);  // (1,1)
    CHECK(std::abs(dvps.matrix(2, 2) - Complex(1.0)) < 1e-15);            // (0,2)

    // Kerr pi between the two modes activates only on (1,1)
    const FockOperator kerr = lift_diagonal_gate(
        [](const Occupation& o) { return std::numbers::pi * o[0] * o[1]; }, basis);
    CHECK(std::abs(kerr.matrix(1, 1) - Complex(-1.0)) < 1e-12);
    CHECK(std::abs(kerr.matrix(0, 0) - Complex(1.0)) < 1e-15);
}

TEST_CASE("factorial switches to log-gamma smoothly") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(factorial(20) == doctest::Approx(2.43290200817664e18));
    CHECK(factorial(21) == doctest::Approx(5.109094217170944e19).epsilon(1e-12));
}
