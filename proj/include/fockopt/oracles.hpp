#pragma once

#include "fockopt/landscape.hpp"
#include "fockopt/qubo.hpp"
#include "fockopt/sampler.hpp"

namespace fockopt {

// Diagonal observable: a cost per output occupation.
using OccupationCost = std::function<double(const Occupation&)>;

// QUBO cost of the thresholded output bit string.
OccupationCost threshold_qubo_cost(const QuboInstance& q);

// Same, but reading only the first k modes after thresholding.
OccupationCost threshold_qubo_cost_top(QuboInstance q, int k);

// E(theta) through the full pipeline: evolve the circuit, square amplitudes,
// average the diagonal cost.
CostOracle make_circuit_oracle(ParametrizedCircuit circuit, Occupation input, Statistics stats,
                               OccupationCost cost);

// Finite-shot estimate of the same expectation; draws `shots` samples per
// evaluation from an internal stream, so evaluation order matters for
// reproducibility.
CostOracle make_sampled_circuit_oracle(ParametrizedCircuit circuit, Occupation input, Statistics stats,
                                       OccupationCost cost, std::int64_t shots, Rng rng);

enum class SliceGate { PhaseShifter, Dvps };

// Single-parameter oracle W * gate(x) * V with the two fixed unitaries lifted
// once up front; used for slices, sweeps and gradient-variance runs.
CostOracle make_sandwich_oracle(const CMat& before, const CMat& after, int mode, SliceGate gate,
                                Occupation input, Statistics stats, OccupationCost cost);

}  // namespace fockopt
