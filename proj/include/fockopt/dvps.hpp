#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fockopt/rng.hpp"
#include "fockopt/types.hpp"

namespace fockopt {

// Number parity, the two-eigenvalue generator q(n) = (1 - (-1)^n)/2.
int q_parity(int n);

// Ancilla occupation pattern, binary entries.
struct AncillaPattern {
    std::vector<int> occupations{1, 0};

    int modes() const { return static_cast<int>(occupations.size()); }
};

// Unique degree-<=N polynomial through (n, values[n]), n = 0..N, by solving
// the Vandermonde system. Coefficients ascend: a_0 + a_1 n + ...
std::vector<Complex> vandermonde_coeffs(const std::vector<Complex>& values);

// alpha(n) = per(u[v_n|v_n]) / n! with v_n = (n, a_1, ..., a_N); the induced
// diagonal action of postselecting the ancillas on their input pattern.
std::vector<Complex> induced_amplitudes(const CMat& u, const AncillaPattern& anc, int n_layer);

// max_n |alpha(n) - alpha(0) exp(i x q(n))| over n = 1..n_layer.
double constraint_residual(const CMat& u, double x, const AncillaPattern& anc, int n_layer);

struct DvpsSolution {
    double x = 0.0;
    CMat u;
    double p = 0.0;      // success probability |alpha(0)|^2
    double alpha = 0.0;  // global phase arg(alpha(0))
    double residual = 0.0;
    int restarts_used = 0;

    nlohmann::json to_json() const;
};

struct SynthesisOptions {
    int restarts = 100;
    std::uint64_t seed = 1;
    double feasibility_tol = 1e-8;
    int threads = 1;
};

// Constrained search over U(3) (exp of the nine-generator Hermitian span)
// maximizing p subject to the DVPS phase constraints on the two-photon
// layer. Penalized Nelder-Mead restarts, Gauss-Newton feasibility polish,
// then projected ascent of p along the constraint manifold.
DvpsSolution synthesize(double x, const AncillaPattern& anc, const SynthesisOptions& opts);

// Exact Fock simulation of the non-linear (cross-Kerr) gate: input |1,0,n>,
// phase shifter theta, tunable beamsplitter x, Kerr phi, 50:50; heralded on
// ancilla |1,0>. Returns the postselection probability and the heralded
// phase on the logical |n> component.
struct NonlinearDvpsResult {
    double success_prob = 0.0;
    double heralded_phase = 0.0;  // in [0, 2 pi)
};
NonlinearDvpsResult nonlinear_dvps_simulate(double x, double theta, double phi, int photons);

// Repeat-until-success ladder: success probability 1 - 2^-m and per-attempt
// phases x_k = 2^{k-1} x (mod 2 pi).
struct MartingaleResult {
    double success_prob = 0.0;
    std::vector<double> ladder;
};
MartingaleResult martingale(int attempts, double x);

// Net phase multiplier applied to q(n) when the first success happens at
// attempt k: failures contribute -x_j, the success +x_k.
double martingale_net_phase(int success_attempt, double x);

}  // namespace fockopt
