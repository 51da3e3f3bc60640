#include "fockopt/qubo.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace fockopt {

QuboInstance::QuboInstance(RMat q, std::optional<HammingConstraint> hamming)
    : hamming_(std::move(hamming)) {
    if (q.rows() != q.cols() || q.rows() < 1) throw std::invalid_argument("QuboInstance: Q must be square");
    q_ = 0.5 * (q + q.transpose());
    if (hamming_) {
        if (hamming_->lambda <= 0.0) throw std::invalid_argument("QuboInstance: lambda must be positive");
        if (hamming_->weight < 0 || hamming_->weight > size())
            throw std::invalid_argument("QuboInstance: weight out of range");
    }
}

double classical_cost(const QuboInstance& q, const BitString& x) {
    if (static_cast<int>(x.size()) != q.size())
        throw std::invalid_argument("classical_cost: bit string length mismatch");
    double cost = 0.0;
    for (int i = 0; i < q.size(); ++i) {
        if (!x[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < q.size(); ++j)
            if (x[static_cast<std::size_t>(j)]) cost += q.q()(i, j);
    }
    if (q.hamming()) {
        int weight = 0;
        for (int b : x) weight += b;
        const double gap = q.hamming()->weight - weight;
        cost += q.hamming()->lambda * gap * gap;
    }
    return cost;
}

QuboInstance random_instance(int n, Rng& rng, bool constrained) {
    if (n < 1) throw std::invalid_argument("random_instance: n must be positive");
    RMat q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform_int(-10, 10);
            q(i, j) = v;
            q(j, i) = v;
        }
    if (!constrained) return QuboInstance(q);
    const double lambda = std::max(1.0, 2.0 * q.maxCoeff());
    return QuboInstance(q, HammingConstraint{n / 2, lambda});
}

std::pair<BitString, double> brute_force_min(const QuboInstance& q, std::optional<int> restrict_weight) {
    const int n = q.size();
    if (n > 24) throw std::length_error("brute_force_min: instance too large to enumerate");

    BitString best;
    double best_cost = 0.0;
    BitString x(static_cast<std::size_t>(n), 0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int weight = 0;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            weight += x[static_cast<std::size_t>(i)];
        }
        if (restrict_weight && weight != *restrict_weight) continue;
        const double cost = classical_cost(q, x);
        if (best.empty() || cost < best_cost || (cost == best_cost && x < best)) {
            best = x;
            best_cost = cost;
        }
    }
    if (best.empty()) throw std::invalid_argument("brute_force_min: no bit string with requested weight");
    return {best, best_cost};
}

double expected_cost(const std::map<BitString, double>& dist,
                     const std::function<double(const BitString&)>& cost) {
    double total = 0.0, mass = 0.0;
    for (const auto& [bits, p] : dist) {
        total += p * cost(bits);
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("expected_cost: distribution is not normalized");
    return total;
}

double expected_cost(const std::map<BitString, double>& dist, const QuboInstance& q) {
    return expected_cost(dist, [&q](const BitString& x) { return classical_cost(q, x); });
}

nlohmann::json QuboInstance::to_json() const {
    nlohmann::json jq = nlohmann::json::array();
    for (int i = 0; i < size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < size(); ++j) {
            const double v = q_(i, j);
            if (v == std::floor(v))
                row.push_back(static_cast<std::int64_t>(v));
            else
                row.push_back(v);
        }
        jq.push_back(std::move(row));
    }
    nlohmann::json j{{"n", size()}, {"q", std::move(jq)}};
    if (hamming_)
        j["hamming"] = {{"w", hamming_->weight}, {"lambda", hamming_->lambda}};
    else
        j["hamming"] = nullptr;
    return j;
}

QuboInstance QuboInstance::from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    RMat q(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) q(i, k) = j.at("q").at(i).at(k).get<double>();
    std::optional<HammingConstraint> h;
    if (j.contains("hamming") && !j.at("hamming").is_null())
        h = HammingConstraint{j.at("hamming").at("w").get<int>(), j.at("hamming").at("lambda").get<double>()};
    return QuboInstance(q, h);
}

}  // namespace fockopt
