#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "fockopt/rng.hpp"
#include "fockopt/types.hpp"

namespace fockopt {

struct HammingConstraint {
    int weight = 0;
    double lambda = 1.0;
};

// Symmetric real cost matrix plus optional Hamming-weight penalty.
class QuboInstance {
  public:
    QuboInstance(RMat q, std::optional<HammingConstraint> hamming = {});

    int size() const { return static_cast<int>(q_.rows()); }
    const RMat& q() const { return q_; }
    const std::optional<HammingConstraint>& hamming() const { return hamming_; }

    nlohmann::json to_json() const;
    static QuboInstance from_json(const nlohmann::json& j);

  private:
    RMat q_;
    std::optional<HammingConstraint> hamming_;
};

// x^T Q x, plus lambda (w - sum x)^2 when the constraint is present.
double classical_cost(const QuboInstance& q, const BitString& x);

// Symmetric integer entries uniform in [-10, 10]; constrained instances get
// w = floor(N/2) and lambda = max(1, 2 max Q_ij).
QuboInstance random_instance(int n, Rng& rng, bool constrained);

// Exhaustive minimizer over all (or all weight-w) bit strings; ties resolve
// to the lexicographically smallest string. N <= 24.
std::pair<BitString, double> brute_force_min(const QuboInstance& q,
                                             std::optional<int> restrict_weight = {});

double expected_cost(const std::map<BitString, double>& dist, const QuboInstance& q);
double expected_cost(const std::map<BitString, double>& dist,
                     const std::function<double(const BitString&)>& cost);

}  // namespace fockopt
