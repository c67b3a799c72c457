// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all ten
//   acceptance --criterion N   run one; exit status reflects it

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "selfadj/boundary.hpp"
#include "selfadj/eigensolve.hpp"
#include "selfadj/error.hpp"
#include "selfadj/femassembly.hpp"
#include "selfadj/harness/config.hpp"
#include "selfadj/harness/experiments.hpp"
#include "selfadj/linalg/envelope_cholesky.hpp"
#include "selfadj/oracles.hpp"

using namespace selfadj;
using namespace selfadj::harness;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

IntervalManifold circle() {
    const std::vector<std::pair<double, double>> iv{{0.0, 2.0 * kPi}};
    const std::vector<double> eta{1.0};
    return build_manifold(iv, eta);
}

const double kTheta3 = 0.9 * kPi;
const double kTheta4 = 0.997 * kPi;
const std::vector<std::size_t> kLadder2{50, 100, 200, 400, 800};
const std::vector<std::size_t> kLadder4{800, 1000, 1200, 1400, 1600, 1800, 2000};

CMatrix quasi_periodic_u(double eps) { return preset_matrix(presets::QuasiPeriodic{{{0, 1}}, 2.0 * kPi * eps}, 2); }
CMatrix robin_local_u(double theta) { return preset_matrix(presets::RobinLocal{theta}, 2); }

// Problems 1-4 are shared with the trace-residual check, so solve each once.
struct Runs {
    std::optional<Problem> p1;
    double p1_seconds = 0.0;
    std::optional<ConvergenceStudy> p2;
    double p2_seconds = 0.0;
    std::optional<Problem> p3;
    double p3_seconds = 0.0;
    std::vector<Problem> p4;
};
Runs runs;

const Problem& problem1() {
    if (!runs.p1) {
        Stopwatch t;
        runs.p1 = solve_problem(circle(), quasi_periodic_u(0.25), 250, 5);
        runs.p1_seconds = t.seconds();
    }
    return *runs.p1;
}

const ConvergenceStudy& problem2() {
    if (!runs.p2) {
        Stopwatch t;
        runs.p2 = run_convergence(circle(), quasi_periodic_u(0.25), kLadder2, 5,
                                  OracleSpec{oracles::Family::QuasiPeriodic, 0.25});
        runs.p2_seconds = t.seconds();
    }
    return *runs.p2;
}

const Problem& problem3() {
    if (!runs.p3) {
        Stopwatch t;
        runs.p3 = solve_problem(circle(), robin_local_u(kTheta3), 2000, 5);
        runs.p3_seconds = t.seconds();
    }
    return *runs.p3;
}

const std::vector<Problem>& problem4() {
    if (runs.p4.empty()) {
        for (const std::size_t n : kLadder4) runs.p4.push_back(solve_problem(circle(), robin_local_u(kTheta4), n, 5));
    }
    return runs.p4;
}

std::size_t negatives(const SpectralResult& r) {
    return static_cast<std::size_t>(std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                                                  [](double v) { return v < 0.0; }));
}

Verdict criterion1() {
    const Problem& p = problem1();
    const auto oracle = oracles::quasi_periodic_spectrum(0.25, 5);
    double worst = 0.0;
    bool above = true;
    for (std::size_t j = 0; j < 5; ++j) {
        const double got = p.result.eigenvalues[static_cast<Eigen::Index>(j)];
        const double want = oracle.eigenvalues[j];
        worst = std::max(worst, std::abs(got - want) / want);
        above = above && got >= want;
    }
    const bool pass = worst <= 5e-3 && above && runs.p1_seconds <= 30.0;
    return {pass, fmt("max rel.err %.3e (<= 5e-3), all from above: %s, %.2f s (<= 30 s)", worst,
                      above ? "yes" : "no", runs.p1_seconds)};
}

Verdict criterion2() {
    const ConvergenceStudy& s = problem2();
    double lo = 1e300, hi = -1e300;
    bool pass = true;
    for (const double slope : s.slope_h1) {
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
        pass = pass && slope >= -1.2 && slope <= -0.8;  // NaN fails
    }
    pass = pass && s.slope_h1.size() == 5 && runs.p2_seconds <= 300.0;
    return {pass, fmt("H1 slopes in [%.4f, %.4f] (need [-1.2, -0.8]), %.2f s (<= 300 s)", lo, hi, runs.p2_seconds)};
}

Verdict criterion3() {
    const Problem& p = problem3();
    const auto oracle = oracles::robin_interval_spectrum(oracles::robin_constant(kTheta3), 5);
    const double mu = oracle.roots[0];
    const double want = oracle.eigenvalues[0];
    const std::size_t neg = negatives(p.result);
    const double got = p.result.eigenvalues[0];
    const double rel = std::abs(got - want) / std::abs(want);
    const PiecewiseLinear f = reconstruct(p.result, 0, p.mesh, p.functions);
    const double mass = mass_fraction(f, 0, 2.0 * kPi - 5.0 / mu, 2.0 * kPi);
    const bool pass = neg == 1 && rel <= 1e-2 && mass >= 0.99 && runs.p3_seconds <= 180.0;
    return {pass, fmt("%zu negative (need 1), lambda_0 %.6e vs oracle %.6e rel.err %.3e (<= 1e-2), "
                      "edge mass %.6f (>= 0.99), %.2f s (<= 180 s)",
                      neg, got, want, rel, mass, runs.p3_seconds)};
}

Verdict criterion4() {
    const std::vector<Problem>& ps = problem4();
    std::optional<std::size_t> threshold;  // index into the ladder
    bool consistent = true;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::size_t neg = negatives(ps[i].result);
        if (!threshold && neg > 0) threshold = i;
        if (threshold) consistent = consistent && neg == 1;
        else consistent = consistent && neg == 0;
    }
    if (!threshold) return {false, "no negative eigenvalue anywhere on the ladder"};
    if (*threshold == 0) return {false, "negative eigenvalue already at the smallest N; no sub-threshold run"};
    const SpectralResult& below = ps[*threshold - 1].result;
    double worst = 0.0;
    for (std::size_t i = *threshold; i < ps.size(); ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            const double want = below.eigenvalues[j];
            worst = std::max(worst, std::abs(ps[i].result.eigenvalues[j + 1] - want) / std::abs(want));
        }
    }
    const bool pass = consistent && worst <= 1e-3;
    return {pass, fmt("N* = %zu (0 negatives below, 1 from N* on: %s), lambda_0(N*) = %.4e, "
                      "upper four vs sub-threshold max rel.err %.3e (<= 1e-3)",
                      kLadder4[*threshold], consistent ? "yes" : "no", ps[*threshold].result.eigenvalues[0], worst)};
}

CMatrix haar(std::mt19937_64& g, Eigen::Index dim) {
    std::normal_distribution<double> nd;
    CMatrix z(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = Complex(nd(g), nd(g));
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
    return q;
}

Verdict criterion5() {
    std::mt19937_64 g(20260501);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int trials = 0;
    int violations = 0;
    double worst_ratio = 0.0;
    while (trials < 100) {
        const std::size_t n = 1 + static_cast<std::size_t>(unit(g) * 4.0) % 4;
        std::vector<std::pair<double, double>> iv;
        std::vector<double> eta;
        double x = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double len = 0.5 + 3.0 * unit(g);
            iv.emplace_back(x, x + len);
            x += len + 0.5;
            eta.push_back(0.25 + 3.75 * unit(g));
        }
        const IntervalManifold m = build_manifold(iv, eta);
        const double target = std::pow(10.0, -3.0 + 2.0 * unit(g));
        const auto resolution = static_cast<std::size_t>(std::ceil(m.total_length() / target));
        if (resolution < 2 * n) continue;
        const Mesh mesh = subdivide(m, resolution);
        bool in_range = true;
        for (std::size_t a = 0; a < n; ++a) in_range = in_range && mesh.step(a) >= 1e-3 && mesh.step(a) <= 1e-1;
        if (!in_range) continue;
        const BoundaryUnitary u = validate_unitary(haar(g, static_cast<Eigen::Index>(2 * n)));
        const BoundaryLinearSystem sys = boundary_system(u, mesh, true);
        if (!std::isfinite(sys.kappa_bound)) continue;  // 1 in spec(U0): no gap, F singular
        const BoundaryFunctionSet bfs = solve_boundary_values(sys);
        ++trials;
        worst_ratio = std::max(worst_ratio, bfs.condition / sys.kappa_bound);
        if (bfs.condition > sys.kappa_bound) ++violations;
    }
    return {violations == 0, fmt("%d trials, %d violations, max kappa/bound %.4f", trials, violations, worst_ratio)};
}

Verdict criterion6() {
    std::mt19937_64 g(20260502);
    std::vector<CMatrix> unitaries{quasi_periodic_u(0.25), robin_local_u(kTheta3)};
    for (int i = 0; i < 8; ++i) unitaries.push_back(haar(g, 2));
    double worst = 0.0;
    bool hermitian = true;
    bool definite = true;
    for (const CMatrix& um : unitaries) {
        const Mesh mesh = subdivide(circle(), 250);
        const BoundaryUnitary u = validate_unitary(um);
        const BoundaryFunctionSet bfs = solve_boundary_values(boundary_system(u, mesh));
        const SpectralPencil pencil = assemble_pencil(mesh, bfs);
        const double h = mesh.step(0);
        const auto r = static_cast<Eigen::Index>(mesh.interior_nodes(0));
        const CMatrix& v = bfs.v;

        CMatrix a = CMatrix::Zero(r, r);
        CMatrix b = CMatrix::Zero(r, r);
        for (Eigen::Index i = 0; i < r; ++i) {
            a(i, i) = 2.0 / h;
            b(i, i) = 4.0 * h / 6.0;
            if (i + 1 < r) {
                a(i, i + 1) = a(i + 1, i) = -1.0 / h;
                b(i, i + 1) = b(i + 1, i) = h / 6.0;
            }
        }
        const Eigen::Index last = r - 1;
        a(0, 0) = (2.0 - v(0, 0)) / h;
        a(last, last) = (2.0 - v(1, 1)) / h;
        a(0, last) = -v(0, 1) / h;
        a(last, 0) = std::conj(a(0, last));
        b(0, 0) = h / 6.0 * (4.0 + 2.0 * (std::norm(v(0, 0)) + std::norm(v(1, 0))) + 2.0 * v(0, 0));
        b(last, last) = h / 6.0 * (4.0 + 2.0 * (std::norm(v(0, 1)) + std::norm(v(1, 1))) + 2.0 * v(1, 1));
        b(0, last) =
            h / 6.0 * (2.0 * (std::conj(v(0, 0)) * v(0, 1) + std::conj(v(1, 0)) * v(1, 1)) + v(0, 1) + std::conj(v(1, 0)));
        b(last, 0) = std::conj(b(0, last));

        const CMatrix ga = pencil.a.to_dense();
        const CMatrix gb = pencil.b.to_dense();
        const auto compare = [&](const CMatrix& got, const CMatrix& want) {
            for (Eigen::Index i = 0; i < r; ++i) {
                for (Eigen::Index j = 0; j < r; ++j) {
                    const double d = std::abs(got(i, j) - want(i, j));
                    if (want(i, j) == Complex(0.0, 0.0)) {
                        if (d != 0.0) worst = std::max(worst, 1.0);  // spurious structural entry
                    } else {
                        worst = std::max(worst, d / std::abs(want(i, j)));
                    }
                }
            }
        };
        compare(ga, a);
        compare(gb, b);
        hermitian = hermitian && (ga - ga.adjoint()).norm() == 0.0 && (gb - gb.adjoint()).norm() == 0.0;
        try {
            linalg::EnvelopeCholesky chol(pencil.b);
        } catch (const Error&) {
            definite = false;
        }
    }
    const bool pass = worst <= 1e-12 && hermitian && definite;
    return {pass, fmt("%zu unitaries at N = 250: max entry rel.err %.3e (<= 1e-12), exactly Hermitian: %s, "
                      "B Cholesky: %s",
                      unitaries.size(), worst, hermitian ? "yes" : "no", definite ? "ok" : "failed")};
}

Verdict criterion7() {
    double worst = 0.0;
    std::size_t count = 0;
    const auto take = [&](const Problem& p) {
        worst = std::max(worst, p.trace_residuals.maxCoeff());
        count += p.result.count();
    };
    take(problem1());
    worst = std::max(worst, problem2().max_trace_residual);
    count += kLadder2.size() * 5;
    take(problem3());
    for (const Problem& p : problem4()) take(p);
    return {worst <= 1e-9, fmt("%zu eigenvectors over problems 1-4, max trace residual / |x| %.3e (<= 1e-9)", count,
                               worst)};
}

Verdict criterion8() {
    const CMatrix periodic = preset_matrix(presets::Periodic{{{0, 1}}}, 2);
    CMatrix direction = CMatrix::Zero(2, 2);
    direction(0, 1) = 1.0;
    direction(1, 0) = -1.0;
    const std::vector<double> eps = default_epsilons();
    const StabilityStudy s = run_stability(circle(), periodic, direction, eps, 250, 5);

    std::string increases;
    for (std::size_t mode = 1; mode < 5; ++mode) {
        for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
            if (s.ratio[i + 1][mode] > s.ratio[i][mode]) {
                increases += fmt(" mode %zu at eps %.0e->%.0e (%.3e->%.3e);", mode, eps[i], eps[i + 1],
                                 s.ratio[i][mode], s.ratio[i + 1][mode]);
                break;
            }
        }
    }
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double q = s.ratio[i][0] / eps[i];
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    const bool linear = hi <= 2.0 * lo;
    const bool pass = increases.empty() && linear;
    return {pass, fmt("modes 1-4 non-increasing: %s;%s mode-0 K/eps in [%.4e, %.4e] (factor %.4f <= 2)",
                      increases.empty() ? "yes" : "no, first increase at", increases.c_str(), lo, hi, hi / lo)};
}

Verdict criterion9() {
    CMatrix swap = CMatrix::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1.0;
    const SymmetryRep rep({swap});
    const double tol = 1e-12;
    const bool robin_same = commutant_check(preset(presets::Robin{{0.4, 0.4}}, 2), rep, tol);
    const bool periodic = commutant_check(preset(presets::Periodic{{{0, 1}}}, 2), rep, tol);
    const CommutantReport differ = commutant_report(preset(presets::Robin{{0.3, 0.7}}, 2), rep, tol);
    const double hand = std::abs(std::polar(1.0, 0.3) - std::polar(1.0, 0.7));  // = 2 sin(0.2)
    const double err = std::abs(differ.max_commutator - hand);
    const bool pass = robin_same && periodic && !differ.invariant && err <= 1e-14;
    return {pass, fmt("robin(0.4, 0.4): %s, periodic: %s, robin(0.3, 0.7): %s with |[v, U]| %.15f vs hand %.15f",
                      robin_same ? "invariant" : "NOT invariant", periodic ? "invariant" : "NOT invariant",
                      differ.invariant ? "invariant" : "not invariant", differ.max_commutator, hand)};
}

Verdict criterion10() {
    struct Case {
        const char* name;
        CMatrix u;
        oracles::Classical kind;
        std::size_t k;
    };
    const std::vector<Case> cases{
        {"dirichlet", -CMatrix::Identity(2, 2), oracles::Classical::Dirichlet, 6},
        {"neumann", CMatrix::Identity(2, 2), oracles::Classical::Neumann, 6},
        {"periodic", preset_matrix(presets::Periodic{{{0, 1}}}, 2), oracles::Classical::Periodic, 7},
    };
    bool pass = true;
    std::string detail;
    double neumann0 = 0.0;
    for (const Case& c : cases) {
        const Problem p = solve_problem(circle(), c.u, 200, c.k);
        const auto oracle = oracles::classical_spectrum(c.kind, c.k);
        double worst = 0.0;
        for (std::size_t j = 0; j < c.k; ++j) {
            const double got = p.result.eigenvalues[static_cast<Eigen::Index>(j)];
            const double want = oracle.eigenvalues[j];
            if (want == 0.0) {
                pass = pass && std::abs(got) <= 1e-8;
                if (c.kind == oracles::Classical::Neumann) neumann0 = std::abs(got);
            } else {
                worst = std::max(worst, std::abs(got - want) / want);
            }
        }
        pass = pass && worst <= 1e-3;
        detail += fmt("%s max rel.err %.3e; ", c.name, worst);
    }
    detail += fmt("|neumann lambda_0| %.3e (<= 1e-8)", neumann0);
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            const int c = std::atoi(argv[++i]);
            if (c < 1 || c > 10) {
                std::fprintf(stderr, "criterion must be 1..10\n");
                return 2;
            }
            selected.push_back(static_cast<std::size_t>(c));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty())
        for (std::size_t c = 1; c <= 10; ++c) selected.push_back(c);

    bool all = true;
    for (const std::size_t c : selected) {
        Verdict v;
        try {
            v = criteria[c - 1]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all = all && v.pass;
        std::printf("criterion %zu: %s  %s\n", c, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
