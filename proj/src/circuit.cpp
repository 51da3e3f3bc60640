#include "fockopt/circuit.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace fockopt {

namespace {

void check_mode(int mode, int modes, const char* what) {
    if (mode < 0 || mode >= modes) throw std::invalid_argument(std::string(what) + ": mode out of range");
}

void check_pair(int a, int b, int modes, const char* what) {
    check_mode(a, modes, what);
    check_mode(b, modes, what);
    if (a == b) throw std::invalid_argument(std::string(what) + ": identical modes");
}

double param_or_fixed(const std::optional<int>& param, double fixed, const RVec& theta) {
    if (!param) return fixed;
    if (*param < 0 || *param >= theta.size()) throw std::invalid_argument("element: parameter index out of range");
    return theta[*param];
}

}  // namespace

bool is_linear_element(const Element& e) {
    return !std::holds_alternative<DvpsShifter>(e) && !std::holds_alternative<KerrCoupler>(e);
}

void ParametrizedCircuit::validate() const {
    if (modes < 1) throw std::invalid_argument("circuit: needs at least one mode");
    for (const auto& e : elements) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, PhaseShifter>) {
                    check_mode(el.mode, modes, "phase shifter");
                    if (el.param && (*el.param < 0 || *el.param >= num_params))
                        throw std::invalid_argument("phase shifter: bad parameter index");
                } else if constexpr (std::is_same_v<T, BeamSplitter5050>) {
                    check_pair(el.mode_a, el.mode_b, modes, "beamsplitter");
                } else if constexpr (std::is_same_v<T, TunableBeamSplitter>) {
                    check_pair(el.mode_a, el.mode_b, modes, "tunable beamsplitter");
                    if (el.param < 0 || el.param >= num_params)
                        throw std::invalid_argument("tunable beamsplitter: bad parameter index");
                } else if constexpr (std::is_same_v<T, FixedUnitary>) {
                    if (el.mode_offset < 0 || el.mode_offset + el.u.rows() > modes)
                        throw std::invalid_argument("fixed unitary: block out of range");
                    if (!is_unitary(el.u)) throw std::invalid_argument("fixed unitary: block not unitary");
                } else if constexpr (std::is_same_v<T, DvpsShifter>) {
                    check_mode(el.mode, modes, "dvps");
                    if (el.param < 0 || el.param >= num_params)
                        throw std::invalid_argument("dvps: bad parameter index");
                } else if constexpr (std::is_same_v<T, KerrCoupler>) {
                    check_pair(el.mode_a, el.mode_b, modes, "kerr");
                }
            },
            e);
    }
}

CMat element_unitary(const Element& e, const RVec& theta, int modes) {
    CMat u = CMat::Identity(modes, modes);
    std::visit(
        [&](const auto& el) {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, PhaseShifter>) {
                check_mode(el.mode, modes, "phase shifter");
                const double x = param_or_fixed(el.param, el.fixed_phase, theta);
                u(el.mode, el.mode) = std::exp(Complex(0.0, x));
            } else if constexpr (std::is_same_v<T, BeamSplitter5050>) {
                check_pair(el.mode_a, el.mode_b, modes, "beamsplitter");
                const double r = 1.0 / std::sqrt(2.0);
                if (el.convention == BsConvention::Hadamard) {
                    u(el.mode_a, el.mode_a) = r;
                    u(el.mode_a, el.mode_b) = r;
                    u(el.mode_b, el.mode_a) = r;
                    u(el.mode_b, el.mode_b) = -r;
                } else {
                    u(el.mode_a, el.mode_a) = r;
                    u(el.mode_a, el.mode_b) = Complex(0.0, r);
                    u(el.mode_b, el.mode_a) = Complex(0.0, r);
                    u(el.mode_b, el.mode_b) = r;
                }
            } else if constexpr (std::is_same_v<T, TunableBeamSplitter>) {
                check_pair(el.mode_a, el.mode_b, modes, "tunable beamsplitter");
                const double x = param_or_fixed(el.param, 0.0, theta);
                const Complex c(std::cos(x / 2.0), 0.0);
                const Complex s(0.0, -std::sin(x / 2.0));
                u(el.mode_a, el.mode_a) = c;
                u(el.mode_a, el.mode_b) = s;
                u(el.mode_b, el.mode_a) = s;
                u(el.mode_b, el.mode_b) = c;
            } else if constexpr (std::is_same_v<T, FixedUnitary>) {
                if (el.mode_offset < 0 || el.mode_offset + el.u.rows() > modes)
                    throw std::invalid_argument("fixed unitary: block out of range");
                u.block(el.mode_offset, el.mode_offset, el.u.rows(), el.u.cols()) = el.u;
            } else {
                throw UnsupportedElementError("element_unitary: non-linear element has no mode-space matrix");
            }
        },
        e);
    return u;
}

CMat compose_linear(const ParametrizedCircuit& c, const RVec& theta) {
    CMat u = CMat::Identity(c.modes, c.modes);
    for (const auto& e : c.elements) u = element_unitary(e, theta, c.modes) * u;
    return u;
}

ParametrizedCircuit universal_mesh(int modes) {
    if (modes < 2) throw std::invalid_argument("universal_mesh: needs at least two modes");
    ParametrizedCircuit c;
    c.modes = modes;
    int next_param = 0;
    for (int col = 0; col < modes; ++col) {
        for (int a = col % 2; a + 1 < modes; a += 2) {
            c.elements.emplace_back(PhaseShifter{a, next_param++, 0.0});
            c.elements.emplace_back(BeamSplitter5050{a, a + 1, BsConvention::Hadamard});
            c.elements.emplace_back(PhaseShifter{a, next_param++, 0.0});
            c.elements.emplace_back(BeamSplitter5050{a, a + 1, BsConvention::Hadamard});
        }
    }
    for (int m = 0; m < modes; ++m) c.elements.emplace_back(PhaseShifter{m, next_param++, 0.0});
    c.num_params = next_param;
    return c;
}

CMat haar_random(int modes, Rng& rng) {
    if (modes < 1) throw std::invalid_argument("haar_random: needs at least one mode");
    CMat z(modes, modes);
    for (int j = 0; j < modes; ++j)
        for (int i = 0; i < modes; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < modes; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

namespace {

nlohmann::json matrix_to_json(const CMat& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

CMat matrix_from_json(const nlohmann::json& j) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(re.at(0).size()) : 0;
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jx = 0; jx < cols; ++jx)
            m(i, jx) = Complex(re.at(i).at(jx).get<double>(), im.at(i).at(jx).get<double>());
    return m;
}

}  // namespace

nlohmann::json circuit_to_json(const ParametrizedCircuit& c) {
    nlohmann::json elems = nlohmann::json::array();
    for (const auto& e : c.elements) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                nlohmann::json je;
                if constexpr (std::is_same_v<T, PhaseShifter>) {
                    je["type"] = "ps";
                    je["mode"] = el.mode;
                    if (el.param)
                        je["param"] = *el.param;
                    else
                        je["phase"] = el.fixed_phase;
                } else if constexpr (std::is_same_v<T, BeamSplitter5050>) {
                    je["type"] = "bs5050";
                    je["a"] = el.mode_a;
                    je["b"] = el.mode_b;
                    je["convention"] = el.convention == BsConvention::Hadamard ? "hadamard" : "symmetric";
                } else if constexpr (std::is_same_v<T, TunableBeamSplitter>) {
                    je["type"] = "tbs";
                    je["a"] = el.mode_a;
                    je["b"] = el.mode_b;
                    je["param"] = el.param;
                } else if constexpr (std::is_same_v<T, FixedUnitary>) {
                    je["type"] = "fixed";
                    je["offset"] = el.mode_offset;
                    je["matrix"] = matrix_to_json(el.u);
                } else if constexpr (std::is_same_v<T, DvpsShifter>) {
                    je["type"] = "dvps";
                    je["mode"] = el.mode;
                    je["param"] = el.param;
                } else if constexpr (std::is_same_v<T, KerrCoupler>) {
                    je["type"] = "kerr";
                    je["a"] = el.mode_a;
                    je["b"] = el.mode_b;
                    je["phase"] = el.phase;
                }
                elems.push_back(std::move(je));
            },
            e);
    }
    return {{"modes", c.modes}, {"num_params", c.num_params}, {"elements", std::move(elems)}};
}

ParametrizedCircuit circuit_from_json(const nlohmann::json& j) {
    ParametrizedCircuit c;
    c.modes = j.at("modes").get<int>();
    c.num_params = j.at("num_params").get<int>();
    for (const auto& je : j.at("elements")) {
        const std::string type = je.at("type").get<std::string>();
        if (type == "ps") {
            PhaseShifter el;
            el.mode = je.at("mode").get<int>();
            if (je.contains("param"))
                el.param = je.at("param").get<int>();
            else
                el.fixed_phase = je.at("phase").get<double>();
            c.elements.emplace_back(el);
        } else if (type == "bs5050") {
            BeamSplitter5050 el;
            el.mode_a = je.at("a").get<int>();
            el.mode_b = je.at("b").get<int>();
            el.convention = je.at("convention").get<std::string>() == "symmetric" ? BsConvention::Symmetric
                                                                                  : BsConvention::Hadamard;
            c.elements.emplace_back(el);
        } else if (type == "tbs") {
            c.elements.emplace_back(
                TunableBeamSplitter{je.at("a").get<int>(), je.at("b").get<int>(), je.at("param").get<int>()});
        } else if (type == "fixed") {
            c.elements.emplace_back(FixedUnitary{matrix_from_json(je.at("matrix")), je.at("offset").get<int>()});
        } else if (type == "dvps") {
            c.elements.emplace_back(DvpsShifter{je.at("mode").get<int>(), je.at("param").get<int>()});
        } else if (type == "kerr") {
            c.elements.emplace_back(
                KerrCoupler{je.at("a").get<int>(), je.at("b").get<int>(), je.at("phase").get<double>()});
        } else {
            throw std::invalid_argument("circuit_from_json: unknown element type '" + type + "'");
        }
    }
    c.validate();
    return c;
}

}  // namespace fockopt
