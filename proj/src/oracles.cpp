#include "fockopt/oracles.hpp"

#include <memory>

namespace fockopt {

OccupationCost threshold_qubo_cost(const QuboInstance& q) {
    return [q](const Occupation& occ) { return classical_cost(q, threshold_bits(occ)); };
}

OccupationCost threshold_qubo_cost_top(QuboInstance q, int k) {
    return [q = std::move(q), k](const Occupation& occ) {
        BitString bits = threshold_bits(occ);
        bits.resize(static_cast<std::size_t>(k));
        return classical_cost(q, bits);
    };
}

CostOracle make_circuit_oracle(ParametrizedCircuit circuit, Occupation input, Statistics stats,
                               OccupationCost cost) {
    circuit.validate();
    OracleMetadata meta{circuit.modes, input.total(), stats};
    const int num_params = circuit.num_params;
    auto fn = [circuit = std::move(circuit), input = std::move(input), stats,
               cost = std::move(cost)](const RVec& theta) {
        const FockState state = evolve_fock(circuit, theta, input, stats);
        double e = 0.0;
        for (std::size_t i = 0; i < state.basis.size(); ++i)
            e += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]) * cost(state.basis[i]);
        return e;
    };
    return CostOracle(std::move(fn), num_params, meta);
}

CostOracle make_sampled_circuit_oracle(ParametrizedCircuit circuit, Occupation input, Statistics stats,
                                       OccupationCost cost, std::int64_t shots, Rng rng) {
    circuit.validate();
    if (shots < 1) throw std::invalid_argument("make_sampled_circuit_oracle: shots must be positive");
    OracleMetadata meta{circuit.modes, input.total(), stats};
    const int num_params = circuit.num_params;
    auto stream = std::make_shared<Rng>(rng);
    auto fn = [circuit = std::move(circuit), input = std::move(input), stats, cost = std::move(cost),
               shots, stream](const RVec& theta) {
        const OutputDistribution dist = exact_distribution(evolve_fock(circuit, theta, input, stats));
        double e = 0.0;
        for (const auto& [occ, count] : sample_shots(dist, shots, *stream))
            e += static_cast<double>(count) * cost(occ);
        return e / static_cast<double>(shots);
    };
    return CostOracle(std::move(fn), num_params, meta);
}

CostOracle make_sandwich_oracle(const CMat& before, const CMat& after, int mode, SliceGate gate,
                                Occupation input, Statistics stats, OccupationCost cost) {
    if (before.rows() != after.rows() || before.rows() != input.modes())
        throw std::invalid_argument("make_sandwich_oracle: mode counts disagree");
    if (mode < 0 || mode >= input.modes())
        throw std::invalid_argument("make_sandwich_oracle: gate mode out of range");

    const int particles = input.total();
    OracleMetadata meta{input.modes(), particles, stats};

    const FockOperator lift_before = lift_linear_unitary(before, particles, stats);
    const FockOperator lift_after = lift_linear_unitary(after, particles, stats);

    const CVec psi0 = lift_before.matrix.col(
        static_cast<Eigen::Index>(basis_index(lift_before.basis, input)));

    // Per-basis-state generator eigenvalue of the varied gate.
    std::vector<double> phase_units(lift_before.basis.size());
    std::vector<double> costs(lift_before.basis.size());
    for (std::size_t i = 0; i < lift_before.basis.size(); ++i) {
        const int n = lift_before.basis[i][mode];
        phase_units[i] = gate == SliceGate::PhaseShifter ? static_cast<double>(n)
                                                         : static_cast<double>(n & 1);
        costs[i] = cost(lift_before.basis[i]);
    }

    auto fn = [psi0, w = lift_after.matrix, phase_units = std::move(phase_units),
               costs = std::move(costs)](const RVec& theta) {
        const double x = theta[0];
        CVec mid = psi0;
        for (Eigen::Index i = 0; i < mid.size(); ++i)
            mid[i] *= std::exp(Complex(0.0, phase_units[static_cast<std::size_t>(i)] * x));
        const CVec out = w * mid;
        double e = 0.0;
        for (Eigen::Index i = 0; i < out.size(); ++i)
            e += std::norm(out[i]) * costs[static_cast<std::size_t>(i)];
        return e;
    };
    return CostOracle(std::move(fn), 1, meta);
}

}  // namespace fockopt
