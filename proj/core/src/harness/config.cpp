#include "selfadj/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "selfadj/error.hpp"

namespace selfadj::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::InvalidConfig, message); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) fail("unknown key '" + item.key() + "' in " + where);
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where + " must be finite");
    return v;
}

double positive(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v > 0.0)) fail(where + " must be positive");
    return v;
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) fail(where + " must be a positive integer");
    return j.get<std::size_t>();
}

// An angle is either radians or {"pi": x} meaning x * pi.
double angle(const json& j, const std::string& where) {
    if (j.is_object()) {
        check_keys(j, {"pi"}, where);
        if (!j.contains("pi")) fail(where + " needs key 'pi'");
        return number(j.at("pi"), where + ".pi") * kPi;
    }
    return number(j, where);
}

std::vector<double> angles(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + " must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(angle(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

RVector real_rows(const json& rows, Eigen::Index dim, Eigen::Index i, const std::string& where) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) fail(where + " must be square");
    RVector out(dim);
    for (Eigen::Index c = 0; c < dim; ++c) out[c] = number(row[static_cast<std::size_t>(c)], where);
    return out;
}

CMatrix matrix(const json& j, const std::string& where) {
    check_keys(j, {"re", "im"}, where);
    if (!j.contains("re") || !j.at("re").is_array() || j.at("re").empty()) fail(where + ".re must be a 2D array");
    const json& re = j.at("re");
    const auto dim = static_cast<Eigen::Index>(re.size());
    CMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) m.row(i) = real_rows(re, dim, i, where + ".re").cast<Complex>().transpose();
    if (j.contains("im")) {
        const json& im = j.at("im");
        if (!im.is_array() || static_cast<Eigen::Index>(im.size()) != dim) fail(where + ".im must match .re");
        for (Eigen::Index i = 0; i < dim; ++i) {
            const RVector row = real_rows(im, dim, i, where + ".im");
            for (Eigen::Index c = 0; c < dim; ++c) m(i, c) += Complex(0.0, row[c]);
        }
    }
    return m;
}

Pairing pairing(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + " must be an array of index pairs");
    Pairing out;
    for (const json& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
            fail(where + " entries must be [l, m] with non-negative integers");
        }
        out.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
    return out;
}

BoundarySpec boundary(const json& j) {
    if (!j.is_object()) fail("boundary must be an object");
    BoundarySpec spec;
    if (j.contains("matrix")) {
        check_keys(j, {"matrix"}, "boundary");
        spec.matrix = matrix(j.at("matrix"), "boundary.matrix");
        return spec;
    }
    if (!j.contains("preset") || !j.at("preset").is_string()) fail("boundary needs 'preset' or 'matrix'");
    const std::string name = j.at("preset").get<std::string>();
    if (name == "dirichlet") {
        check_keys(j, {"preset"}, "boundary");
        spec.preset = presets::Dirichlet{};
    } else if (name == "neumann") {
        check_keys(j, {"preset"}, "boundary");
        spec.preset = presets::Neumann{};
    } else if (name == "robin") {
        check_keys(j, {"preset", "beta"}, "boundary");
        if (!j.contains("beta")) fail("robin needs 'beta'");
        spec.preset = presets::Robin{angles(j.at("beta"), "boundary.beta")};
    } else if (name == "periodic") {
        check_keys(j, {"preset", "pairing"}, "boundary");
        spec.preset = presets::Periodic{j.contains("pairing") ? pairing(j.at("pairing"), "boundary.pairing") : Pairing{}};
    } else if (name == "quasi_periodic") {
        check_keys(j, {"preset", "pairing", "alpha", "epsilon"}, "boundary");
        if (j.contains("alpha") == j.contains("epsilon")) fail("quasi_periodic needs exactly one of 'alpha', 'epsilon'");
        const double alpha = j.contains("alpha") ? angle(j.at("alpha"), "boundary.alpha")
                                                 : 2.0 * kPi * number(j.at("epsilon"), "boundary.epsilon");
        spec.preset = presets::QuasiPeriodic{
            j.contains("pairing") ? pairing(j.at("pairing"), "boundary.pairing") : Pairing{}, alpha};
    } else if (name == "robin_local") {
        check_keys(j, {"preset", "theta"}, "boundary");
        if (!j.contains("theta")) fail("robin_local needs 'theta'");
        spec.preset = presets::RobinLocal{angle(j.at("theta"), "boundary.theta")};
    } else {
        fail("unknown boundary preset '" + name + "'");
    }
    return spec;
}

OracleSpec oracle(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) fail("oracle needs 'family'");
    const std::string family = j.at("family").get<std::string>();
    OracleSpec spec;
    if (family == "dirichlet" || family == "neumann" || family == "periodic") {
        check_keys(j, {"family"}, "oracle");
        spec.family = family == "dirichlet" ? oracles::Family::Dirichlet
                      : family == "neumann" ? oracles::Family::Neumann
                                            : oracles::Family::Periodic;
    } else if (family == "quasi_periodic") {
        check_keys(j, {"family", "epsilon"}, "oracle");
        if (!j.contains("epsilon")) fail("oracle quasi_periodic needs 'epsilon'");
        spec.family = oracles::Family::QuasiPeriodic;
        spec.parameter = number(j.at("epsilon"), "oracle.epsilon");
        if (spec.parameter < 0.0 || spec.parameter >= 1.0) fail("oracle.epsilon must lie in [0, 1)");
    } else if (family == "robin") {
        check_keys(j, {"family", "c", "theta"}, "oracle");
        if (j.contains("c") == j.contains("theta")) fail("oracle robin needs exactly one of 'c', 'theta'");
        spec.family = oracles::Family::RobinInterval;
        spec.parameter = j.contains("c") ? number(j.at("c"), "oracle.c")
                                         : oracles::robin_constant(angle(j.at("theta"), "oracle.theta"));
    } else {
        fail("unknown oracle family '" + family + "'");
    }
    return spec;
}

void fill_default_pairing(Pairing& p, std::size_t dim) {
    if (!p.empty()) return;
    for (std::size_t l = 0; l + 1 < dim; l += 2) p.emplace_back(l, l + 1);
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::Solve: return "solve";
        case Experiment::Converge: return "converge";
        case Experiment::Condition: return "condition";
        case Experiment::Stability: return "stability";
        case Experiment::Symmetry: return "symmetry";
    }
    return "solve";
}

Experiment parse_experiment(const std::string& name) {
    for (Experiment e : {Experiment::Solve, Experiment::Converge, Experiment::Condition, Experiment::Stability,
                         Experiment::Symmetry}) {
        if (to_string(e) == name) return e;
    }
    fail("unknown experiment '" + name + "'");
}

std::vector<double> default_epsilons() {
    std::vector<double> out;
    for (double decade : {1e-4, 1e-3, 1e-2}) {
        for (double m : {1.0, 2.0, 5.0}) out.push_back(m * decade);
    }
    out.push_back(1e-1);
    return out;
}

std::vector<std::size_t> parse_ladder(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            fail("resolution '" + item + "' is not a positive integer");
        }
        if (used != item.size() || v == 0 || item.find('-') != std::string::npos) {
            fail("resolution '" + item + "' is not a positive integer");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) fail("empty resolution list");
    return out;
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    check_keys(j, {"experiment", "manifold", "boundary", "n", "k", "tolerances", "output", "eigenfunctions", "oracle",
                   "stability", "symmetry", "condition"},
               "config");
    RunConfig cfg;
    if (j.contains("experiment")) {
        if (!j.at("experiment").is_string()) fail("experiment must be a string");
        cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
    }

    if (!j.contains("manifold")) fail("config needs 'manifold'");
    const json& m = j.at("manifold");
    check_keys(m, {"intervals", "metric"}, "manifold");
    if (!m.contains("intervals") || !m.at("intervals").is_array()) fail("manifold.intervals must be an array");
    for (const json& iv : m.at("intervals")) {
        if (!iv.is_array() || iv.size() != 2) fail("each interval must be [a, b]");
        cfg.manifold.intervals.emplace_back(number(iv[0], "interval endpoint"), number(iv[1], "interval endpoint"));
    }
    if (m.contains("metric")) {
        if (!m.at("metric").is_array()) fail("manifold.metric must be an array");
        for (const json& e : m.at("metric")) cfg.manifold.metric.push_back(number(e, "manifold.metric"));
    } else {
        cfg.manifold.metric.assign(cfg.manifold.intervals.size(), 1.0);
    }

    if (j.contains("boundary")) cfg.boundary = boundary(j.at("boundary"));

    if (j.contains("n")) {
        const json& n = j.at("n");
        cfg.resolutions.clear();
        if (n.is_array()) {
            for (const json& e : n) cfg.resolutions.push_back(count(e, "n"));
            if (cfg.resolutions.empty()) fail("n must not be empty");
        } else {
            cfg.resolutions.push_back(count(n, "n"));
        }
    }
    if (j.contains("k")) cfg.k = count(j.at("k"), "k");

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        check_keys(t, {"eigen_residual", "commutator"}, "tolerances");
        if (t.contains("eigen_residual")) cfg.tol_eig = positive(t.at("eigen_residual"), "tolerances.eigen_residual");
        if (t.contains("commutator")) cfg.tol_commutator = positive(t.at("commutator"), "tolerances.commutator");
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) fail("output must be a string");
        cfg.output = j.at("output").get<std::string>();
    }
    if (j.contains("eigenfunctions")) {
        if (!j.at("eigenfunctions").is_boolean()) fail("eigenfunctions must be a boolean");
        cfg.eigenfunctions = j.at("eigenfunctions").get<bool>();
    }
    if (j.contains("oracle")) cfg.oracle = oracle(j.at("oracle"));

    if (j.contains("stability")) {
        const json& s = j.at("stability");
        check_keys(s, {"direction", "epsilons"}, "stability");
        if (s.contains("direction")) cfg.direction = matrix(s.at("direction"), "stability.direction");
        if (s.contains("epsilons")) {
            if (!s.at("epsilons").is_array() || s.at("epsilons").empty()) fail("stability.epsilons must be a list");
            for (const json& e : s.at("epsilons")) {
                const double v = number(e, "stability.epsilons");
                if (v < 0.0) fail("stability.epsilons must be non-negative");
                cfg.epsilons.push_back(v);
            }
        }
    }
    if (cfg.epsilons.empty()) cfg.epsilons = default_epsilons();

    if (j.contains("symmetry")) {
        const json& s = j.at("symmetry");
        check_keys(s, {"generators"}, "symmetry");
        if (!s.contains("generators") || !s.at("generators").is_array() || s.at("generators").empty()) {
            fail("symmetry.generators must be a non-empty list");
        }
        for (std::size_t i = 0; i < s.at("generators").size(); ++i) {
            cfg.generators.push_back(matrix(s.at("generators")[i], "symmetry.generators[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("condition")) {
        const json& c = j.at("condition");
        check_keys(c, {"delta_h"}, "condition");
        if (c.contains("delta_h")) cfg.delta_h = positive(c.at("delta_h"), "condition.delta_h");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

IntervalManifold make_manifold(const ManifoldSpec& spec) { return build_manifold(spec.intervals, spec.metric); }

CMatrix boundary_matrix(const RunConfig& config, std::size_t boundary_dim) {
    if (config.boundary && config.boundary->matrix) return *config.boundary->matrix;
    if (config.boundary && config.boundary->preset) {
        BoundaryPreset p = *config.boundary->preset;
        if (auto* per = std::get_if<presets::Periodic>(&p)) fill_default_pairing(per->pairing, boundary_dim);
        if (auto* qp = std::get_if<presets::QuasiPeriodic>(&p)) fill_default_pairing(qp->pairing, boundary_dim);
        return preset_matrix(p, boundary_dim);
    }
    if (config.oracle) {
        switch (config.oracle->family) {
            case oracles::Family::Dirichlet: return preset_matrix(presets::Dirichlet{}, boundary_dim);
            case oracles::Family::Neumann: return preset_matrix(presets::Neumann{}, boundary_dim);
            case oracles::Family::Periodic: return preset_matrix(presets::Periodic{{{0, 1}}}, boundary_dim);
            case oracles::Family::QuasiPeriodic:
                return preset_matrix(presets::QuasiPeriodic{{{0, 1}}, 2.0 * kPi * config.oracle->parameter},
                                     boundary_dim);
            case oracles::Family::RobinInterval:
                return preset_matrix(presets::RobinLocal{2.0 * std::atan(config.oracle->parameter)}, boundary_dim);
        }
    }
    fail("config needs 'boundary' (or an 'oracle' implying one)");
}

void require_oracle_manifold(const IntervalManifold& manifold) {
    const bool ok = manifold.interval_count() == 1 && manifold.interval(0).a == 0.0 &&
                    std::abs(manifold.interval(0).b - 2.0 * kPi) <= 1e-12 && manifold.metric(0) == 1.0;
    if (!ok) fail("oracle spectra are defined on the single interval [0, 2 pi] with unit metric");
}

oracles::OracleSpectrum oracle_spectrum(const OracleSpec& spec, std::size_t count) {
    switch (spec.family) {
        case oracles::Family::Dirichlet: return oracles::classical_spectrum(oracles::Classical::Dirichlet, count);
        case oracles::Family::Neumann: return oracles::classical_spectrum(oracles::Classical::Neumann, count);
        case oracles::Family::Periodic: return oracles::classical_spectrum(oracles::Classical::Periodic, count);
        case oracles::Family::QuasiPeriodic: return oracles::quasi_periodic_spectrum(spec.parameter, count);
        case oracles::Family::RobinInterval: return oracles::robin_interval_spectrum(spec.parameter, count);
    }
    return {};
}

}  // namespace selfadj::harness
