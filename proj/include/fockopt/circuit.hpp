#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fockopt/rng.hpp"
#include "fockopt/types.hpp"

namespace fockopt {

enum class BsConvention { Hadamard, Symmetric };

// exp(i n x) on one mode; either bound to a parameter or fixed.
struct PhaseShifter {
    int mode = 0;
    std::optional<int> param;
    double fixed_phase = 0.0;
};

struct BeamSplitter5050 {
    int mode_a = 0;
    int mode_b = 1;
    BsConvention convention = BsConvention::Hadamard;
};

// [[cos x/2, -i sin x/2], [-i sin x/2, cos x/2]]
struct TunableBeamSplitter {
    int mode_a = 0;
    int mode_b = 1;
    int param = 0;
};

struct FixedUnitary {
    CMat u;
    int mode_offset = 0;
};

// exp(i q(n) x) with q(n) = n mod 2. Non-linear: Fock-space path only.
struct DvpsShifter {
    int mode = 0;
    int param = 0;
};

// exp(i phase n_a n_b). Non-linear: Fock-space path only.
struct KerrCoupler {
    int mode_a = 0;
    int mode_b = 1;
    double phase = 0.0;
};

using Element = std::variant<PhaseShifter, BeamSplitter5050, TunableBeamSplitter, FixedUnitary,
                             DvpsShifter, KerrCoupler>;

bool is_linear_element(const Element& e);

// Elements apply left-to-right in time; composed matrices multiply with the
// last element leftmost.
struct ParametrizedCircuit {
    int modes = 0;
    int num_params = 0;
    std::vector<Element> elements;

    void validate() const;
};

// N x N mode unitary of a single linear element. Throws UnsupportedElementError
// for DVPS/Kerr.
CMat element_unitary(const Element& e, const RVec& theta, int modes);

CMat compose_linear(const ParametrizedCircuit& c, const RVec& theta);

// Clements-style rectangle of Mach-Zehnder cells (phi PS, 50:50, 2theta PS,
// 50:50) plus one output phase per mode: N^2 parametrized phase shifters.
ParametrizedCircuit universal_mesh(int modes);

CMat haar_random(int modes, Rng& rng);

nlohmann::json circuit_to_json(const ParametrizedCircuit& c);
ParametrizedCircuit circuit_from_json(const nlohmann::json& j);

}  // namespace fockopt
