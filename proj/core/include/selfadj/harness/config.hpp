#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfadj/boundary.hpp"
#include "selfadj/manifold.hpp"
#include "selfadj/oracles.hpp"
#include "selfadj/types.hpp"

namespace selfadj::harness {

enum class Experiment { Solve, Converge, Condition, Stability, Symmetry };

std::string to_string(Experiment e);
/// Throws Error{InvalidConfig} for an unknown name.
Experiment parse_experiment(const std::string& name);

struct ManifoldSpec {
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> metric;  // defaults to all ones
};

/// Either a named preset or an explicit matrix.
struct BoundarySpec {
    std::optional<BoundaryPreset> preset;
    std::optional<CMatrix> matrix;
};

struct OracleSpec {
    oracles::Family family = oracles::Family::Dirichlet;
    double parameter = 0.0;  // epsilon for quasi_periodic, c for robin
};

struct RunConfig {
    std::optional<Experiment> experiment;
    ManifoldSpec manifold;
    std::optional<BoundarySpec> boundary;
    std::vector<std::size_t> resolutions{250};
    std::size_t k = 10;
    double tol_eig = 1e-9;
    double tol_commutator = 1e-12;
    std::string output = "selfadj_";
    bool eigenfunctions = false;
    std::optional<OracleSpec> oracle;
    std::optional<CMatrix> direction;
    std::vector<double> epsilons;
    std::vector<CMatrix> generators;
    double delta_h = 1e-4;
};

/// Parses a JSON document. Unknown keys, wrong types and out-of-range values
/// throw Error{InvalidConfig}.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// 1-2-5 steps per decade from 1e-4 to 1e-1.
std::vector<double> default_epsilons();

/// Parses "250" or "50,100,200".
std::vector<std::size_t> parse_ladder(const std::string& text);

IntervalManifold make_manifold(const ManifoldSpec& spec);

/// Boundary matrix for the config: the explicit one, the preset, or the one
/// implied by the oracle family when no boundary is given.
CMatrix boundary_matrix(const RunConfig& config, std::size_t boundary_dim);

/// Throws Error{InvalidConfig} unless the manifold is the single interval
/// [0, 2 pi] with unit metric, the setting of every oracle.
void require_oracle_manifold(const IntervalManifold& manifold);

oracles::OracleSpectrum oracle_spectrum(const OracleSpec& spec, std::size_t count);

}  // namespace selfadj::harness
