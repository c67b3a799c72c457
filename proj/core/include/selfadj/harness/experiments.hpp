#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "selfadj/eigensolve.hpp"
#include "selfadj/femassembly.hpp"
#include "selfadj/harness/config.hpp"
#include "selfadj/oracles.hpp"

namespace selfadj::harness {

/// Everything produced by one discretization and solve.
struct Problem {
    Mesh mesh;
    BoundaryUnitary unitary;
    BoundaryLinearSystem system;
    BoundaryFunctionSet functions;
    SpectralPencil pencil;
    SpectralResult result;
    /// Per eigenpair: |(phi - i dphi) - U (phi + i dphi)| / |coefficients|.
    RVector trace_residuals;
};

Problem solve_problem(const IntervalManifold& manifold, const CMatrix& u, std::size_t resolution, std::size_t k);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Fraction of the squared L2 norm of f on interval alpha lying in [lo, hi].
double mass_fraction(const PiecewiseLinear& f, std::size_t alpha, double lo, double hi);

struct ConvergenceStudy {
    std::vector<std::size_t> resolutions;
    std::vector<double> oracle;                    // reference eigenvalues
    std::vector<std::vector<double>> eigenvalues;  // [N][mode]
    std::vector<std::vector<double>> eig_error;    // |lambda_N - lambda|
    std::vector<std::vector<double>> h1_error;
    std::vector<double> slope_eig;                 // per mode
    std::vector<double> slope_h1;
    double max_trace_residual = 0.0;
};

/// H1 references inside degenerate oracle eigenspaces are the normalized
/// projections of the computed function onto that eigenspace.
ConvergenceStudy run_convergence(const IntervalManifold& manifold, const CMatrix& u,
                                 const std::vector<std::size_t>& ladder, std::size_t k, const OracleSpec& oracle);

struct StabilityStudy {
    std::vector<double> epsilons;
    std::vector<double> delta_u;                   // spectral norm of U_eps - U
    std::vector<double> base;                      // eigenvalues of U
    std::vector<std::vector<double>> eigenvalues;  // [eps][mode]
    std::vector<std::vector<double>> ratio;        // K(eps) = |dlambda| / |dU|, 0 when dU = 0
};

/// U_eps is the unitary factor of the polar decomposition of U + i eps A.
StabilityStudy run_stability(const IntervalManifold& manifold, const CMatrix& u, const CMatrix& direction,
                             const std::vector<double>& epsilons, std::size_t resolution, std::size_t k);

struct ConditionRow {
    std::size_t resolution = 0;
    double h_min = 0.0;
    double h_max = 0.0;
    double kappa = 0.0;        // from singular values; inf when F is singular
    double kappa_bound = 0.0;  // inf when F is singular
    double min_distance = 0.0;
    bool ill_conditioned = false;
    double delta_h = 0.0;
    std::optional<double> delta_lambda_lower;  // absent when the bound is not positive
    double kappa_estimate = 0.0;
    std::size_t suggested_resolution = 0;      // first N' >= N with kappa <= 1e8
};

ConditionRow condition_report(const IntervalManifold& manifold, const CMatrix& u, std::size_t resolution,
                              double delta_h);

/// Runs the experiment, writes its CSV files under config.output and a short
/// human-readable report to `report`. Returns the process exit code.
int run_experiment(const RunConfig& config, Experiment experiment, std::ostream& report);

enum class LogLevel { Quiet, Info, Debug };
/// From SELFADJ_LOG = quiet | info | debug (default info).
LogLevel log_level();

}  // namespace selfadj::harness
