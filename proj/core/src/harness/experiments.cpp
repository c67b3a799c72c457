#include "selfadj/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>

#include "selfadj/error.hpp"
#include "selfadj/harness/csv.hpp"
#include "selfadj/io.hpp"
#include "selfadj/linalg/singular_values.hpp"

namespace selfadj::harness {

namespace {

constexpr double kTolDegenerate = 1e-9;

void log(LogLevel level, const std::string& message) {
    if (log_level() >= level) std::cerr << "[selfadj] " << message << '\n';
}

std::size_t single_resolution(const RunConfig& config) {
    if (config.resolutions.size() != 1) {
        throw Error(ErrorKind::InvalidConfig, "this experiment takes a single N, not a ladder");
    }
    return config.resolutions.front();
}

/// Indices of the oracle eigenvalues equal to eigenvalue j up to kTolDegenerate.
std::vector<std::size_t> degenerate_group(const std::vector<double>& values, std::size_t j) {
    std::vector<std::size_t> group;
    const double scale = std::max(1.0, std::abs(values[j]));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i] - values[j]) <= kTolDegenerate * scale) group.push_back(i);
    }
    return group;
}

std::vector<std::string> indexed(const std::string& stem, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(stem + std::to_string(j));
    return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

double simpson_abs2(Complex fa, Complex fb, double a, double b, double lo, double hi) {
    // |f|^2 of the linear interpolant of (a, fa), (b, fb) over [lo, hi].
    auto at = [&](double x) {
        const double t = (x - a) / (b - a);
        return std::norm(fa + t * (fb - fa));
    };
    return (hi - lo) / 6.0 * (at(lo) + 4.0 * at(0.5 * (lo + hi)) + at(hi));
}

}  // namespace

LogLevel log_level() {
    const char* env = std::getenv("SELFADJ_LOG");
    if (env == nullptr) return LogLevel::Info;
    const std::string v(env);
    if (v == "quiet") return LogLevel::Quiet;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

Problem solve_problem(const IntervalManifold& manifold, const CMatrix& u, std::size_t resolution, std::size_t k) {
    Mesh mesh = subdivide(manifold, resolution);
    BoundaryUnitary unitary = validate_unitary(u, manifold.boundary_dim());
    BoundaryLinearSystem system = boundary_system(unitary, mesh);
    BoundaryFunctionSet functions = solve_boundary_values(system);
    SpectralPencil pencil = assemble_pencil(mesh, functions);
    SpectralResult result = solve_pencil(pencil, k, functions);

    RVector trace(static_cast<Eigen::Index>(result.count()));
    for (std::size_t j = 0; j < result.count(); ++j) {
        const BoundaryResidual r = boundary_condition_residual(unitary, result.traces[j].phi, result.traces[j].dphi);
        trace[static_cast<Eigen::Index>(j)] = r.full / result.coefficients.col(static_cast<Eigen::Index>(j)).norm();
    }
    return Problem{std::move(mesh),      std::move(unitary), std::move(system), std::move(functions),
                   std::move(pencil),    std::move(result),  std::move(trace)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(m);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double mass_fraction(const PiecewiseLinear& f, std::size_t alpha, double lo, double hi) {
    const double total = f.norm_squared();
    if (!(total > 0.0)) return 0.0;
    const auto& x = f.nodes.at(alpha);
    const auto& v = f.values.at(alpha);
    double inside = 0.0;
    for (std::size_t e = 0; e + 1 < x.size(); ++e) {
        const double a = std::max(lo, x[e]);
        const double b = std::min(hi, x[e + 1]);
        if (b > a) inside += simpson_abs2(v[e], v[e + 1], x[e], x[e + 1], a, b);
    }
    return inside / total;
}

ConvergenceStudy run_convergence(const IntervalManifold& manifold, const CMatrix& u,
                                 const std::vector<std::size_t>& ladder, std::size_t k, const OracleSpec& oracle) {
    require_oracle_manifold(manifold);
    // Two spare oracle values keep a degenerate group at the cut complete.
    const oracles::OracleSpectrum ref = oracle_spectrum(oracle, k + 2);

    ConvergenceStudy study;
    study.resolutions = ladder;
    study.oracle.assign(ref.eigenvalues.begin(), ref.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    for (const std::size_t n : ladder) {
        log(LogLevel::Info, "converge: N = " + std::to_string(n));
        const Problem p = solve_problem(manifold, u, n, k);
        std::vector<double> lam(k), err(k), h1(k);
        for (std::size_t j = 0; j < k; ++j) {
            lam[j] = p.result.eigenvalues[static_cast<Eigen::Index>(j)];
            err[j] = std::abs(lam[j] - ref.eigenvalues[j]);
            const PiecewiseLinear numeric = reconstruct(p.result, j, p.mesh, p.functions);
            const std::vector<std::size_t> group = degenerate_group(ref.eigenvalues, j);
            if (group.size() == 1) {
                h1[j] = h1_error(numeric, ref.eigenfunctions[j], p.mesh);
            } else {
                std::vector<AnalyticFunction> basis;
                for (const std::size_t i : group) basis.push_back(ref.eigenfunctions[i]);
                h1[j] = h1_error(numeric, project_onto(numeric, basis, p.mesh), p.mesh);
            }
        }
        study.max_trace_residual = std::max(study.max_trace_residual, p.trace_residuals.maxCoeff());
        study.eigenvalues.push_back(std::move(lam));
        study.eig_error.push_back(std::move(err));
        study.h1_error.push_back(std::move(h1));
    }

    std::vector<double> xs(ladder.begin(), ladder.end());
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> e, h;
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            e.push_back(study.eig_error[i][j]);
            h.push_back(study.h1_error[i][j]);
        }
        study.slope_eig.push_back(loglog_slope(xs, e));
        study.slope_h1.push_back(loglog_slope(xs, h));
    }
    return study;
}

StabilityStudy run_stability(const IntervalManifold& manifold, const CMatrix& u, const CMatrix& direction,
                             const std::vector<double>& epsilons, std::size_t resolution, std::size_t k) {
    if (direction.rows() != u.rows() || direction.cols() != u.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "stability direction must match the boundary unitary");
    }
    StabilityStudy study;
    study.epsilons = epsilons;
    const Problem base = solve_problem(manifold, u, resolution, k);
    study.base.assign(base.result.eigenvalues.data(), base.result.eigenvalues.data() + k);

    for (const double eps : epsilons) {
        log(LogLevel::Info, "stability: eps = " + format_real(eps));
        const CMatrix u_eps = linalg::nearest_unitary(u + kI * eps * direction);
        const double du = linalg::singular_values(u_eps - u)[0];
        std::vector<double> lam = study.base;
        std::vector<double> ratio(k, 0.0);
        if (du > 0.0) {
            const Problem p = solve_problem(manifold, u_eps, resolution, k);
            for (std::size_t j = 0; j < k; ++j) {
                lam[j] = p.result.eigenvalues[static_cast<Eigen::Index>(j)];
                ratio[j] = std::abs(lam[j] - study.base[j]) / du;
            }
        }
        study.delta_u.push_back(du);
        study.eigenvalues.push_back(std::move(lam));
        study.ratio.push_back(std::move(ratio));
    }
    return study;
}

ConditionRow condition_report(const IntervalManifold& manifold, const CMatrix& u, std::size_t resolution,
                              double delta_h) {
    const Mesh mesh = subdivide(manifold, resolution);
    const BoundaryUnitary unitary = validate_unitary(u, manifold.boundary_dim());
    const BoundaryLinearSystem sys = boundary_system(unitary, mesh, true);

    ConditionRow row;
    row.resolution = resolution;
    row.h_min = sys.steps.minCoeff();
    row.h_max = sys.steps.maxCoeff();
    // When 1 is in spec(U0), F vanishes up to rounding and its singular
    // values carry no information.
    row.kappa = std::isfinite(sys.kappa_bound) ? linalg::condition_number(sys.f)
                                               : std::numeric_limits<double>::infinity();
    row.kappa_bound = sys.kappa_bound;
    row.min_distance = sys.min_distance;
    row.ill_conditioned = !(row.kappa <= kIllConditioned);
    row.delta_h = delta_h;
    row.kappa_estimate = (row.h_max / row.h_min) / delta_h;
    try {
        row.delta_lambda_lower =
            perturbation_bounds(sys, RVector::Constant(sys.steps.size(), delta_h)).delta_lambda_lower;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PerturbationTooLarge) throw;
    }

    row.suggested_resolution = 0;
    for (std::size_t n = resolution; n <= resolution + 1000; ++n) {
        const BoundaryLinearSystem s = n == resolution ? sys : boundary_system(unitary, subdivide(manifold, n), true);
        if (std::isfinite(s.kappa_bound) && linalg::condition_number(s.f) <= kIllConditioned) {
            row.suggested_resolution = n;
            break;
        }
    }
    return row;
}

namespace {

int run_solve(const RunConfig& config, std::ostream& report) {
    const IntervalManifold manifold = make_manifold(config.manifold);
    const CMatrix u = boundary_matrix(config, manifold.boundary_dim());
    const std::size_t n = single_resolution(config);
    log(LogLevel::Info, "solve: N = " + std::to_string(n) + ", k = " + std::to_string(config.k));
    const Problem p = solve_problem(manifold, u, n, config.k);

    if (log_level() >= LogLevel::Debug) dump_csv(config.output, p.system, p.functions, p.pencil);

    CsvTable table{{"index", "lambda", "residual"}, {}};
    for (std::size_t j = 0; j < p.result.count(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        table.add_row({cell(j), cell(p.result.eigenvalues[jj]), cell(p.result.residuals[jj])});
    }
    write_csv(config.output + "eigenvalues.csv", table);

    if (config.eigenfunctions) {
        for (std::size_t j = 0; j < p.result.count(); ++j) {
            const PiecewiseLinear f = reconstruct(p.result, j, p.mesh, p.functions);
            CsvTable t{{"x", "re", "im"}, {}};
            for (std::size_t a = 0; a < f.interval_count(); ++a) {
                for (std::size_t i = 0; i < f.nodes[a].size(); ++i) {
                    t.add_row({cell(f.nodes[a][i]), cell(f.values[a][i].real()), cell(f.values[a][i].imag())});
                }
            }
            write_csv(config.output + "eigenfunction_" + std::to_string(j) + ".csv", t);
        }
    }

    report << "N = " << n << ", |r| = " << p.mesh.dimension() << ", k = " << p.result.count() << '\n';
    report << "kappa(F) = " << format_real(p.functions.condition)
           << ", kappa_bound = " << format_real(p.system.kappa_bound)
           << ", raw |FV - C| = " << format_real(p.functions.raw_residual) << '\n';
    if (p.functions.ill_conditioned) report << "warning: F is ill-conditioned; increase N\n";
    if (!p.result.residuals_within(config.tol_eig)) {
        report << "warning: some eigen-residual exceeds " << format_real(config.tol_eig) << '\n';
    }
    report << "max trace residual = " << format_real(p.trace_residuals.maxCoeff()) << '\n';

    std::optional<oracles::OracleSpectrum> ref;
    if (config.oracle) {
        require_oracle_manifold(manifold);
        ref = oracle_spectrum(*config.oracle, p.result.count());
    }
    for (std::size_t j = 0; j < p.result.count(); ++j) {
        const double lam = p.result.eigenvalues[static_cast<Eigen::Index>(j)];
        report << std::setw(4) << j << "  " << format_real(lam);
        if (ref) report << "  oracle " << format_real(ref->eigenvalues[j]) << "  rel.err "
                        << format_real(std::abs(lam - ref->eigenvalues[j]) / std::max(1.0, std::abs(ref->eigenvalues[j])));
        if (lam < 0.0) {
            // Edge-state localisation: best endpoint by mass within 5/mu.
            const double mu = std::sqrt(-lam);
            const PiecewiseLinear f = reconstruct(p.result, j, p.mesh, p.functions);
            double best = 0.0;
            for (std::size_t l = 0; l < manifold.boundary_dim(); ++l) {
                const double x = manifold.boundary_point(l);
                best = std::max(best, mass_fraction(f, l / 2, x - 5.0 / mu, x + 5.0 / mu));
            }
            report << "  edge mass " << format_real(best);
        }
        report << '\n';
    }
    return 0;
}

int run_converge(const RunConfig& config, std::ostream& report) {
    if (!config.oracle) throw Error(ErrorKind::InvalidConfig, "converge needs an 'oracle'");
    const IntervalManifold manifold = make_manifold(config.manifold);
    const CMatrix u = boundary_matrix(config, manifold.boundary_dim());
    const ConvergenceStudy s = run_convergence(manifold, u, config.resolutions, config.k, *config.oracle);

    std::vector<std::string> header{"N"};
    append(header, indexed("err_lambda_", config.k));
    append(header, indexed("err_h1_", config.k));
    CsvTable table{header, {}};
    for (std::size_t i = 0; i < s.resolutions.size(); ++i) {
        std::vector<std::string> row{cell(s.resolutions[i])};
        for (const double e : s.eig_error[i]) row.push_back(cell(e));
        for (const double e : s.h1_error[i]) row.push_back(cell(e));
        table.add_row(std::move(row));
    }
    write_csv(config.output + "convergence.csv", table);

    CsvTable slopes{{"mode", "oracle", "slope_lambda", "slope_h1"}, {}};
    for (std::size_t j = 0; j < config.k; ++j) {
        slopes.add_row({cell(j), cell(s.oracle[j]), cell(s.slope_eig[j]), cell(s.slope_h1[j])});
    }
    write_csv(config.output + "convergence_slopes.csv", slopes);

    report << "mode  oracle  slope(lambda)  slope(H1)\n";
    for (std::size_t j = 0; j < config.k; ++j) {
        report << std::setw(4) << j << "  " << format_real(s.oracle[j]) << "  " << format_real(s.slope_eig[j])
               << "  " << format_real(s.slope_h1[j]) << '\n';
    }
    report << "max trace residual = " << format_real(s.max_trace_residual) << '\n';
    return 0;
}

int run_stability_experiment(const RunConfig& config, std::ostream& report) {
    const IntervalManifold manifold = make_manifold(config.manifold);
    const CMatrix u = boundary_matrix(config, manifold.boundary_dim());
    CMatrix direction;
    if (config.direction) {
        direction = *config.direction;
    } else if (u.rows() == 2) {
        direction = CMatrix::Zero(2, 2);
        direction(0, 1) = 1.0;
        direction(1, 0) = -1.0;
    } else {
        throw Error(ErrorKind::InvalidConfig, "stability needs 'stability.direction' when 2n > 2");
    }
    const StabilityStudy s =
        run_stability(manifold, u, direction, config.epsilons, single_resolution(config), config.k);

    std::vector<std::string> header{"epsilon", "delta_u"};
    append(header, indexed("lambda_", config.k));
    append(header, indexed("K_", config.k));
    CsvTable table{header, {}};
    for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
        std::vector<std::string> row{cell(s.epsilons[i]), cell(s.delta_u[i])};
        for (const double v : s.eigenvalues[i]) row.push_back(cell(v));
        for (const double v : s.ratio[i]) row.push_back(cell(v));
        table.add_row(std::move(row));
    }
    write_csv(config.output + "stability.csv", table);

    report << "K(eps) = |lambda_j(U_eps) - lambda_j(U)| / |U_eps - U|_2 (spectral norm)\n";
    for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
        report << format_real(s.epsilons[i]);
        for (const double v : s.ratio[i]) report << "  " << format_real(v);
        report << '\n';
    }
    return 0;
}

int run_condition(const RunConfig& config, std::ostream& report) {
    const IntervalManifold manifold = make_manifold(config.manifold);
    const CMatrix u = boundary_matrix(config, manifold.boundary_dim());
    CsvTable table{{"N", "h_min", "h_max", "kappa", "kappa_bound", "min_distance", "ill_conditioned", "delta_h",
                    "delta_lambda_lower", "kappa_estimate", "suggested_N"},
                   {}};
    for (const std::size_t n : config.resolutions) {
        const ConditionRow r = condition_report(manifold, u, n, config.delta_h);
        table.add_row({cell(r.resolution), cell(r.h_min), cell(r.h_max), cell(r.kappa), cell(r.kappa_bound),
                       cell(r.min_distance), cell(r.ill_conditioned), cell(r.delta_h),
                       cell(r.delta_lambda_lower.value_or(std::numeric_limits<double>::quiet_NaN())),
                       cell(r.kappa_estimate), cell(r.suggested_resolution)});
        report << "N = " << n << ": kappa(F) = " << format_real(r.kappa) << " <= bound "
               << format_real(r.kappa_bound) << ", estimate for dh = " << format_real(r.delta_h) << ": "
               << format_real(r.kappa_estimate) << '\n';
        if (r.ill_conditioned) {
            report << "  IllConditioned: kappa > 1e8; ";
            if (r.suggested_resolution != 0) {
                report << "use N = " << r.suggested_resolution << '\n';
            } else {
                report << "no N up to " << n + 1000 << " helps\n";
            }
        }
    }
    write_csv(config.output + "condition.csv", table);
    return 0;
}

int run_symmetry(const RunConfig& config, std::ostream& report) {
    const IntervalManifold manifold = make_manifold(config.manifold);
    const BoundaryUnitary u = validate_unitary(boundary_matrix(config, manifold.boundary_dim()),
                                               manifold.boundary_dim());
    if (config.generators.empty()) throw Error(ErrorKind::InvalidConfig, "symmetry needs 'symmetry.generators'");
    std::optional<SymmetryRep> rep;
    try {
        rep.emplace(config.generators);
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("malformed representation: ") + e.what());
    }
    if (rep->dim() != u.dim()) {
        throw Error(ErrorKind::InvalidConfig, "representation and boundary unitary differ in dimension");
    }
    const CommutantReport c = commutant_report(u, *rep, config.tol_commutator);

    CsvTable table{{"generator", "commutator"}, {}};
    for (std::size_t g = 0; g < c.commutators.size(); ++g) table.add_row({cell(g), cell(c.commutators[g])});
    write_csv(config.output + "symmetry.csv", table);

    report << "invariant = " << (c.invariant ? "true" : "false")
           << ", max |vU - Uv| = " << format_real(c.max_commutator) << '\n';
    if (!c.invariant) report << "generator " << c.worst_element << " does not commute with U\n";
    return 0;
}

}  // namespace

int run_experiment(const RunConfig& config, Experiment experiment, std::ostream& report) {
    report << std::setprecision(17);
    switch (experiment) {
        case Experiment::Solve: return run_solve(config, report);
        case Experiment::Converge: return run_converge(config, report);
        case Experiment::Condition: return run_condition(config, report);
        case Experiment::Stability: return run_stability_experiment(config, report);
        case Experiment::Symmetry: return run_symmetry(config, report);
    }
    return 2;
}

}  // namespace selfadj::harness
