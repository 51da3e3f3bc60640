#include "fockopt/dvps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "fockopt/circuit.hpp"
#include "fockopt/fock.hpp"
#include "fockopt/sampler.hpp"

namespace fockopt {

using std::numbers::pi;

int q_parity(int n) {
    if (n < 0) throw std::invalid_argument("q_parity: negative photon number");
    return n & 1;
}

std::vector<Complex> vandermonde_coeffs(const std::vector<Complex>& values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    if (n == 0) throw std::invalid_argument("vandermonde_coeffs: no values");
    CMat v(n, n);
    CVec rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double power = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            v(i, j) = power;
            power *= static_cast<double>(i);
        }
        rhs[i] = values[static_cast<std::size_t>(i)];
    }
    const CVec a = v.partialPivLu().solve(rhs);
    return {a.data(), a.data() + a.size()};
}

std::vector<Complex> induced_amplitudes(const CMat& u, const AncillaPattern& anc, int n_layer) {
    if (u.rows() != u.cols() || u.rows() != anc.modes() + 1)
        throw std::invalid_argument("induced_amplitudes: need an (N+1)-mode unitary");
    for (int a : anc.occupations)
        if (a != 0 && a != 1) throw std::invalid_argument("induced_amplitudes: ancilla entries must be binary");

    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n_layer) + 1);
    for (int n = 0; n <= n_layer; ++n) {
        std::vector<int> counts;
        counts.reserve(static_cast<std::size_t>(anc.modes()) + 1);
        counts.push_back(n);
        counts.insert(counts.end(), anc.occupations.begin(), anc.occupations.end());
        const Occupation v(counts);
        out.push_back(permanent(index_submatrix(u, v, v)) / factorial(n));
    }
    return out;
}

double constraint_residual(const CMat& u, double x, const AncillaPattern& anc, int n_layer) {
    const auto alpha = induced_amplitudes(u, anc, n_layer);
    double worst = 0.0;
    for (int n = 1; n <= n_layer; ++n) {
        const Complex target = alpha[0] * std::exp(Complex(0.0, q_parity(n) * x));
        worst = std::max(worst, std::abs(alpha[static_cast<std::size_t>(n)] - target));
    }
    return worst;
}

namespace {

constexpr int kLayer = 2;
constexpr int kDim = 9;

// The nine u(3) generators: three diagonal units, three real-symmetric
// pair couplings, three imaginary-antisymmetric ones.
std::array<CMat, kDim> make_generators() {
    std::array<CMat, kDim> t;
    for (auto& m : t) m = CMat::Zero(3, 3);
    t[0](0, 0) = 1.0;
    t[1](1, 1) = 1.0;
    t[2](2, 2) = 1.0;
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (int k = 0; k < 3; ++k) {
        const auto [a, b] = pairs[static_cast<std::size_t>(k)];
        t[static_cast<std::size_t>(3 + k)](a, b) = 1.0;
        t[static_cast<std::size_t>(3 + k)](b, a) = 1.0;
        t[static_cast<std::size_t>(6 + k)](a, b) = Complex(0.0, -1.0);
        t[static_cast<std::size_t>(6 + k)](b, a) = Complex(0.0, 1.0);
    }
    return t;
}

const std::array<CMat, kDim>& generators() {
    static const std::array<CMat, kDim> t = make_generators();
    return t;
}

using Params = Eigen::Matrix<double, kDim, 1>;

CMat exp_unitary(const Params& theta) {
    CMat h = CMat::Zero(3, 3);
    for (int k = 0; k < kDim; ++k) h += theta[k] * generators()[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec phases(3);
    for (int i = 0; i < 3; ++i) phases[i] = std::exp(Complex(0.0, es.eigenvalues()[i]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// alpha(0..2) from the relevant 2x2 block; closed forms of the three
// permanents keep the inner optimization loop cheap.
struct AlphaSet {
    Complex a0, a1, a2;
};

AlphaSet alphas_fast(const CMat& u, int anc_mode) {
    const Complex l = u(0, 0);
    const Complex d = u(anc_mode, anc_mode);
    const Complex off = u(0, anc_mode) * u(anc_mode, 0);
    return {d, l * d + off, l * l * d + 2.0 * l * off};
}

int single_ancilla_mode(const AncillaPattern& anc) {
    if (anc.modes() == 2 && anc.occupations[0] + anc.occupations[1] == 1)
        return anc.occupations[0] == 1 ? 1 : 2;
    return 0;  // not a single-photon pattern
}

struct Residuals {
    Eigen::Vector4d g;
    double p;
};

Residuals residuals_of(const CMat& u, double x, const AncillaPattern& anc) {
    Residuals r;
    Complex a0, a1, a2;
    if (const int m = single_ancilla_mode(anc)) {
        const AlphaSet a = alphas_fast(u, m);
        a0 = a.a0;
        a1 = a.a1;
        a2 = a.a2;
    } else {
        const auto a = induced_amplitudes(u, anc, kLayer);
        a0 = a[0];
        a1 = a[1];
        a2 = a[2];
    }
    const Complex g1 = a1 - a0 * std::exp(Complex(0.0, x));
    const Complex g2 = a2 - a0;
    r.g << g1.real(), g1.imag(), g2.real(), g2.imag();
    r.p = std::norm(a0);
    return r;
}

double penalized_objective(const Params& theta, double x, const AncillaPattern& anc, double mu) {
    const Residuals r = residuals_of(exp_unitary(theta), x, anc);
    // Extra weight on -p steers restarts away from the p = 0 solutions of
    // the constraint set.
    return -6.0 * r.p + mu * r.g.squaredNorm();
}

Params nelder_mead(const std::function<double(const Params&)>& f, Params start, double scale,
                   int max_iters) {
    constexpr int n = kDim;
    std::array<Params, n + 1> pts;
    std::array<double, n + 1> vals;
    pts[0] = start;
    vals[0] = f(start);
    for (int i = 0; i < n; ++i) {
        Params p = start;
        p[i] += scale;
        pts[static_cast<std::size_t>(i + 1)] = p;
        vals[static_cast<std::size_t>(i + 1)] = f(p);
    }

    std::array<int, n + 1> order;
    for (int iter = 0; iter < max_iters; ++iter) {
        for (int i = 0; i <= n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)];
        });
        const int best = order[0], worst = order[n], second = order[n - 1];
        if (vals[static_cast<std::size_t>(worst)] - vals[static_cast<std::size_t>(best)] < 1e-13) break;

        Params centroid = Params::Zero();
        for (int i = 0; i <= n; ++i)
            if (order[static_cast<std::size_t>(i)] != worst)
                centroid += pts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        centroid /= static_cast<double>(n);

        const Params reflected = centroid + (centroid - pts[static_cast<std::size_t>(worst)]);
        const double fr = f(reflected);
        if (fr < vals[static_cast<std::size_t>(best)]) {
            const Params expanded = centroid + 2.0 * (centroid - pts[static_cast<std::size_t>(worst)]);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[static_cast<std::size_t>(worst)] = expanded;
                vals[static_cast<std::size_t>(worst)] = fe;
            } else {
                pts[static_cast<std::size_t>(worst)] = reflected;
                vals[static_cast<std::size_t>(worst)] = fr;
            }
        } else if (fr < vals[static_cast<std::size_t>(second)]) {
            pts[static_cast<std::size_t>(worst)] = reflected;
            vals[static_cast<std::size_t>(worst)] = fr;
        } else {
            const Params contracted = centroid + 0.5 * (pts[static_cast<std::size_t>(worst)] - centroid);
            const double fc = f(contracted);
            if (fc < vals[static_cast<std::size_t>(worst)]) {
                pts[static_cast<std::size_t>(worst)] = contracted;
                vals[static_cast<std::size_t>(worst)] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    const int idx = order[static_cast<std::size_t>(i)];
                    pts[static_cast<std::size_t>(idx)] =
                        pts[static_cast<std::size_t>(best)] +
                        0.5 * (pts[static_cast<std::size_t>(idx)] - pts[static_cast<std::size_t>(best)]);
                    vals[static_cast<std::size_t>(idx)] = f(pts[static_cast<std::size_t>(idx)]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (vals[static_cast<std::size_t>(i)] < vals[static_cast<std::size_t>(best)]) best = i;
    return pts[static_cast<std::size_t>(best)];
}

Eigen::Matrix<double, 4, kDim> constraint_jacobian(const Params& theta, double x,
                                                   const AncillaPattern& anc) {
    Eigen::Matrix<double, 4, kDim> jac;
    const double h = 1e-6;
    for (int k = 0; k < kDim; ++k) {
        Params tp = theta, tm = theta;
        tp[k] += h;
        tm[k] -= h;
        const Eigen::Vector4d gp = residuals_of(exp_unitary(tp), x, anc).g;
        const Eigen::Vector4d gm = residuals_of(exp_unitary(tm), x, anc).g;
        jac.col(k) = (gp - gm) / (2.0 * h);
    }
    return jac;
}

// Minimum-norm Gauss-Newton steps onto the constraint set.
Params feasibility_polish(Params theta, double x, const AncillaPattern& anc, int iters = 40) {
    for (int it = 0; it < iters; ++it) {
        const Eigen::Vector4d g = residuals_of(exp_unitary(theta), x, anc).g;
        if (g.cwiseAbs().maxCoeff() < 1e-13) break;
        const auto jac = constraint_jacobian(theta, x, anc);
        Eigen::Matrix4d jjt = jac * jac.transpose();
        jjt.diagonal().array() += 1e-12;
        theta -= jac.transpose() * jjt.ldlt().solve(g);
    }
    return theta;
}

// Ascend p along the tangent of the constraint manifold, re-polishing after
// each trial step.
Params tangent_ascent(Params theta, double x, const AncillaPattern& anc, int iters = 60) {
    theta = feasibility_polish(theta, x, anc);
    double p = residuals_of(exp_unitary(theta), x, anc).p;
    double step = 0.2;
    const double h = 1e-6;
    for (int it = 0; it < iters; ++it) {
        Params grad;
        for (int k = 0; k < kDim; ++k) {
            Params tp = theta, tm = theta;
            tp[k] += h;
            tm[k] -= h;
            grad[k] = (residuals_of(exp_unitary(tp), x, anc).p -
                       residuals_of(exp_unitary(tm), x, anc).p) /
                      (2.0 * h);
        }
        const auto jac = constraint_jacobian(theta, x, anc);
        Eigen::Matrix4d jjt = jac * jac.transpose();
        jjt.diagonal().array() += 1e-12;
        Params dir = grad - jac.transpose() * jjt.ldlt().solve(jac * grad);
        const double norm = dir.norm();
        if (norm < 1e-12) break;
        dir /= norm;

        bool improved = false;
        while (step > 1e-7) {
            const Params cand = feasibility_polish(theta + step * dir, x, anc, 15);
            const Residuals r = residuals_of(exp_unitary(cand), x, anc);
            if (r.p > p + 1e-14 && r.g.cwiseAbs().maxCoeff() < 1e-10) {
                theta = cand;
                p = r.p;
                step = std::min(step * 1.6, 0.5);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return theta;
}

struct RestartOutcome {
    Params theta;
    double p = -1.0;
    double residual = 1e9;
};

RestartOutcome run_restart(double x, const AncillaPattern& anc, Rng rng) {
    Params theta;
    for (int k = 0; k < kDim; ++k) theta[k] = rng.uniform(-pi, pi);
    double scale = 0.5;
    for (const double mu : {1e2, 1e4, 1e6}) {
        theta = nelder_mead([&](const Params& t) { return penalized_objective(t, x, anc, mu); }, theta,
                            scale, 2000);
        scale = 0.1;
    }
    theta = feasibility_polish(theta, x, anc);
    const Residuals r = residuals_of(exp_unitary(theta), x, anc);
    return {theta, r.p, r.g.cwiseAbs().maxCoeff()};
}

}  // namespace

DvpsSolution synthesize(double x, const AncillaPattern& anc, const SynthesisOptions& opts) {
    if (anc.modes() != kLayer)
        throw std::invalid_argument("synthesize: only the two-photon layer (two ancillas) is supported");
    if (opts.restarts < 1) throw std::invalid_argument("synthesize: needs at least one restart");

    const Rng base(opts.seed);
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
    const int threads = std::max(1, opts.threads);
    if (threads == 1) {
        for (int r = 0; r < opts.restarts; ++r)
            outcomes[static_cast<std::size_t>(r)] = run_restart(x, anc, base.split(static_cast<std::uint64_t>(r)));
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < opts.restarts; r = next.fetch_add(1))
                    outcomes[static_cast<std::size_t>(r)] =
                        run_restart(x, anc, base.split(static_cast<std::uint64_t>(r)));
            });
        for (auto& t : pool) t.join();
    }

    // Deterministic merge: feasible outcome of highest p, earliest restart
    // on exact ties.
    int best = -1;
    for (int r = 0; r < opts.restarts; ++r) {
        const auto& o = outcomes[static_cast<std::size_t>(r)];
        if (o.residual >= opts.feasibility_tol) continue;
        if (best < 0 || o.p > outcomes[static_cast<std::size_t>(best)].p) best = r;
    }
    if (best < 0) {
        double closest = 1e9;
        for (const auto& o : outcomes) closest = std::min(closest, o.residual);
        throw InfeasibleError("synthesize: no feasible unitary found", closest);
    }

    Params theta = tangent_ascent(outcomes[static_cast<std::size_t>(best)].theta, x, anc);
    const CMat u = exp_unitary(theta);
    const auto alpha = induced_amplitudes(u, anc, kLayer);

    DvpsSolution sol;
    sol.x = x;
    sol.u = u;
    sol.p = std::norm(alpha[0]);
    sol.alpha = std::arg(alpha[0]);
    sol.residual = constraint_residual(u, x, anc, kLayer);
    sol.restarts_used = opts.restarts;
    if (sol.residual >= opts.feasibility_tol)
        throw InfeasibleError("synthesize: polish left the constraint set", sol.residual);
    return sol;
}

nlohmann::json DvpsSolution::to_json() const {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            rr.push_back(u(i, j).real());
            ri.push_back(u(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return {{"x", x},           {"u_re", std::move(re)},      {"u_im", std::move(im)}, {"p", p},
            {"alpha", alpha},   {"residual", residual},       {"restarts_used", restarts_used}};
}

NonlinearDvpsResult nonlinear_dvps_simulate(double x, double theta, double phi, int photons) {
    if (photons < 0) throw std::invalid_argument("nonlinear_dvps_simulate: negative photon count");

    ParametrizedCircuit c;
    c.modes = 3;
    c.num_params = 1;
    c.elements = {
        Element{PhaseShifter{0, std::nullopt, theta}},
        Element{TunableBeamSplitter{0, 1, 0}},
        Element{KerrCoupler{1, 2, phi}},
        Element{BeamSplitter5050{0, 1, BsConvention::Hadamard}},
    };

    const Occupation input(std::vector<int>{1, 0, photons});
    RVec params(1);
    params[0] = x;
    const FockState state = evolve_fock(c, params, input, Statistics::Boson);

    const Occupation heralded(std::vector<int>{1, 0, photons});
    const Complex amp =
        state.amplitudes[static_cast<Eigen::Index>(basis_index(state.basis, heralded))];

    NonlinearDvpsResult out;
    out.success_prob = std::norm(amp);
    double phase = std::arg(amp);
    if (phase < 0.0) phase += 2.0 * pi;
    out.heralded_phase = phase;
    return out;
}

MartingaleResult martingale(int attempts, double x) {
    if (attempts < 1) throw std::invalid_argument("martingale: needs at least one attempt");
    MartingaleResult r;
    r.success_prob = 1.0 - std::pow(2.0, -attempts);
    r.ladder.reserve(static_cast<std::size_t>(attempts));
    double phase = x;
    for (int k = 1; k <= attempts; ++k) {
        r.ladder.push_back(std::fmod(phase, 2.0 * pi));
        phase *= 2.0;
    }
    return r;
}

double martingale_net_phase(int success_attempt, double x) {
    if (success_attempt < 1) throw std::invalid_argument("martingale_net_phase: bad attempt index");
    // -x - 2x - ... - 2^{k-2}x + 2^{k-1}x telescopes back to x.
    double net = std::ldexp(x, success_attempt - 1);
    for (int j = 1; j < success_attempt; ++j) net -= std::ldexp(x, j - 1);
    net = std::fmod(net, 2.0 * pi);
    if (net < 0.0) net += 2.0 * pi;
    return net;
}

}  // namespace fockopt
