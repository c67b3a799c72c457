#include "selfadj/eigensolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SparseLU>

#include "selfadj/error.hpp"
#include "selfadj/linalg/envelope_cholesky.hpp"
#include "selfadj/linalg/hermitian_eigen.hpp"

namespace selfadj {

namespace {

constexpr double kTolCluster = 1e-10;
constexpr double kTolGroup = 1e-4;

struct GaussRule {
    std::array<double, 5> x;
    std::array<double, 5> w;
};

constexpr GaussRule kGauss5{
    {-0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
     0.538469310105683091036314420700, 0.906179845938663992797626878299},
    {0.236926885056189087514264040720, 0.478628670499366468041291514836, 128.0 / 225.0,
     0.478628670499366468041291514836, 0.236926885056189087514264040720}};

// Calls f(alpha, x, weight, value, slope) at every quadrature point.
template <typename F>
void for_each_gauss_point(const PiecewiseLinear& u, F&& f) {
    for (std::size_t alpha = 0; alpha < u.interval_count(); ++alpha) {
        const auto& xs = u.nodes[alpha];
        const auto& vs = u.values[alpha];
        for (std::size_t e = 0; e + 1 < xs.size(); ++e) {
            const double half = 0.5 * (xs[e + 1] - xs[e]);
            const double mid = 0.5 * (xs[e + 1] + xs[e]);
            const Complex slope = (vs[e + 1] - vs[e]) / (xs[e + 1] - xs[e]);
            for (std::size_t q = 0; q < 5; ++q) {
                const double t = kGauss5.x[q];
                const Complex value = 0.5 * (1.0 - t) * vs[e] + 0.5 * (1.0 + t) * vs[e + 1];
                f(alpha, mid + half * t, half * kGauss5.w[q], value, slope);
            }
        }
    }
}

void make_phase_canonical(Eigen::Ref<CVector> x) {
    const double peak = x.cwiseAbs().maxCoeff();
    if (peak == 0.0) return;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) >= 1e-6 * peak) {
            x *= std::conj(x[i]) / std::abs(x[i]);
            x[i] = std::abs(x[i]);
            return;
        }
    }
}


using SparseMatrix = Eigen::SparseMatrix<Complex>;

SparseMatrix shifted(const SpectralPencil& pencil, double sigma) {
    const std::size_t n = pencil.dim();
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(3 * n + 2 * pencil.a.border().size() + 2 * pencil.b.border().size());
    auto add = [&](std::size_t i, std::size_t j) {
        const Complex v = pencil.a(i, j) - sigma * pencil.b(i, j);
        entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v);
        if (i != j) entries.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i), std::conj(v));
    };
    for (std::size_t i = 0; i < n; ++i) {
        add(i, i);
        if (i + 1 < n) add(i + 1, i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> border;
    for (const auto& [ij, v] : pencil.a.border()) border.push_back(ij);
    for (const auto& [ij, v] : pencil.b.border()) border.push_back(ij);
    std::sort(border.begin(), border.end());
    border.erase(std::unique(border.begin(), border.end()), border.end());
    for (const auto& [i, j] : border) add(i, j);
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

CMatrix multiply_columns(const linalg::HermitianBandBorder& m, const CMatrix& x) {
    CMatrix y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) y.col(j) = m.multiply(x.col(j));
    return y;
}

// One step of block inverse iteration on the sparse pencil followed by
// Rayleigh-Ritz on the group. The dense reduction leaves residuals of order
// eps |L^{-1} A L^{-H}|, which grows like 1/h^2; this brings them back to the
// level of eps |A|. Groups whose shifted factorization fails are kept as is.
void refine_group(const SpectralPencil& pencil, SpectralResult& out, Eigen::Index start, Eigen::Index size) {
    const double lo = out.eigenvalues[start];
    const double sigma = lo - 1e-12 * std::max(1.0, std::abs(lo));
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(shifted(pencil, sigma));
    if (lu.info() != Eigen::Success) return;
    const CMatrix x = out.coefficients.middleCols(start, size);
    CMatrix y = lu.solve(multiply_columns(pencil.b, x));
    if (lu.info() != Eigen::Success || !y.allFinite()) return;
    for (Eigen::Index j = 0; j < size; ++j) y.col(j).normalize();

    const CMatrix by = multiply_columns(pencil.b, y);
    const CMatrix ay = multiply_columns(pencil.a, y);
    CMatrix br = y.adjoint() * by;
    CMatrix ar = y.adjoint() * ay;
    br = (0.5 * (br + br.adjoint())).eval();
    ar = (0.5 * (ar + ar.adjoint())).eval();
    const Eigen::LLT<CMatrix> llt(br);
    if (llt.info() != Eigen::Success) return;
    CMatrix reduced = llt.matrixL().solve(ar);
    reduced = llt.matrixL().solve(reduced.adjoint()).eval();
    const linalg::HermitianEigen small = linalg::hermitian_eigen(reduced);
    const CMatrix z = llt.matrixU().solve(small.vectors);
    out.coefficients.middleCols(start, size) = y * z;
    out.eigenvalues.segment(start, size) = small.values;
}

}  // namespace

bool SpectralResult::residuals_within(double tol) const {
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
        if (!(residuals[j] <= tol * std::max(1.0, std::abs(eigenvalues[j])))) return false;
    }
    return true;
}

SpectralResult solve_pencil(const SpectralPencil& pencil, std::size_t k) {
    const std::size_t n = pencil.dim();
    if (k == 0 || k > n) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "requested " + std::to_string(k) + " eigenpairs of a pencil of size " + std::to_string(n));
    }
    const linalg::EnvelopeCholesky chol(pencil.b);

    // C = L^{-1} A L^{-H} = L^{-1} (L^{-1} A)^H since A is Hermitian.
    CMatrix w = pencil.a.to_dense();
    for (Eigen::Index j = 0; j < w.cols(); ++j) chol.solve_lower(w.col(j));
    CMatrix c = w.adjoint();
    w.resize(0, 0);
    for (Eigen::Index j = 0; j < c.cols(); ++j) chol.solve_lower(c.col(j));

    linalg::HermitianEigen eig = linalg::hermitian_eigen_lowest(std::move(c), k);

    SpectralResult out;
    out.eigenvalues = eig.values;
    out.coefficients = std::move(eig.vectors);
    const auto kk = static_cast<Eigen::Index>(k);
    for (Eigen::Index j = 0; j < kk; ++j) chol.solve_upper(out.coefficients.col(j));

    // Refine groups of close eigenvalues together so that inverse iteration
    // cannot collapse nearly degenerate vectors onto one another.
    Eigen::Index start = 0;
    for (Eigen::Index j = 1; j <= kk; ++j) {
        const bool split = j == kk || out.eigenvalues[j] - out.eigenvalues[j - 1] >
                                          kTolGroup * std::max(1.0, std::abs(out.eigenvalues[j - 1]));
        if (!split) continue;
        refine_group(pencil, out, start, j - start);
        start = j;
    }

    // Re-orthonormalize degenerate clusters in the B product.
    start = 0;
    for (Eigen::Index j = 1; j <= kk; ++j) {
        const bool split = j == kk || out.eigenvalues[j] - out.eigenvalues[j - 1] >
                                          kTolCluster * std::max(1.0, std::abs(out.eigenvalues[j - 1]));
        if (!split) continue;
        for (Eigen::Index p = start; p < j; ++p) {
            auto x = out.coefficients.col(p);
            for (Eigen::Index q = start; q < p; ++q) {
                const CVector bq = pencil.b.multiply(out.coefficients.col(q));
                x -= bq.dot(x) * out.coefficients.col(q);
            }
            const CVector bx = pencil.b.multiply(x);
            x /= std::sqrt(std::abs(x.dot(bx)));
        }
        start = j;
    }

    out.residuals.resize(kk);
    for (Eigen::Index j = 0; j < kk; ++j) {
        make_phase_canonical(out.coefficients.col(j));
        const CVector x = out.coefficients.col(j);
        const CVector bx = pencil.b.multiply(x);
        out.residuals[j] = (pencil.a.multiply(x) - out.eigenvalues[j] * bx).norm() / bx.norm();
    }
    return out;
}

SpectralResult solve_pencil(const SpectralPencil& pencil, std::size_t k, const BoundaryFunctionSet& bfs) {
    SpectralResult out = solve_pencil(pencil, k);
    out.traces.reserve(k);
    for (Eigen::Index j = 0; j < out.coefficients.cols(); ++j) {
        out.traces.push_back(trace_of(out.coefficients.col(j), bfs));
    }
    return out;
}

Complex PiecewiseLinear::value(std::size_t alpha, double x) const {
    const auto& xs = nodes.at(alpha);
    const auto& vs = values.at(alpha);
    if (x <= xs.front()) return vs.front();
    if (x >= xs.back()) return vs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto e = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[e]) / (xs[e + 1] - xs[e]);
    return (1.0 - t) * vs[e] + t * vs[e + 1];
}

double PiecewiseLinear::norm_squared() const {
    double total = 0.0;
    for (std::size_t alpha = 0; alpha < nodes.size(); ++alpha) {
        const auto& xs = nodes[alpha];
        const auto& vs = values[alpha];
        for (std::size_t e = 0; e + 1 < xs.size(); ++e) {
            const double h = xs[e + 1] - xs[e];
            total += h / 3.0 * (std::norm(vs[e]) + std::norm(vs[e + 1]) + (std::conj(vs[e]) * vs[e + 1]).real());
        }
    }
    return total;
}

PiecewiseLinear reconstruct(const SpectralResult& result, std::size_t index, const Mesh& mesh,
                            const BoundaryFunctionSet& bfs) {
    if (index >= result.count()) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "eigenpair " + std::to_string(index) + " of " + std::to_string(result.count()));
    }
    const CVector c = result.coefficients.col(static_cast<Eigen::Index>(index));
    const BasisLayout layout = basis_layout(mesh);
    if (static_cast<std::size_t>(c.size()) != layout.dimension) {
        throw Error(ErrorKind::DimensionMismatch, "eigenvector does not match the mesh");
    }
    const BoundaryTrace trace = trace_of(c, bfs);

    PiecewiseLinear out;
    for (std::size_t alpha = 0; alpha < mesh.interval_count(); ++alpha) {
        const std::size_t r = layout.interior[alpha];
        out.nodes.push_back(mesh.nodes(alpha));
        std::vector<Complex> v(r + 2);
        v.front() = trace.phi[static_cast<Eigen::Index>(2 * alpha)];
        v.back() = trace.phi[static_cast<Eigen::Index>(2 * alpha + 1)];
        for (std::size_t k = 1; k <= r; ++k) v[k] = c[static_cast<Eigen::Index>(layout.offset[alpha] + k - 1)];
        out.values.push_back(std::move(v));
    }
    return out;
}

double h1_error(const PiecewiseLinear& numeric, const AnalyticFunction& analytic, const Mesh& mesh) {
    (void)mesh;  // the quadrature runs on the nodes stored in `numeric`
    const double norm = std::sqrt(numeric.norm_squared());
    if (!(norm > 0.0)) return std::numeric_limits<double>::infinity();

    Complex overlap{};
    for_each_gauss_point(numeric, [&](std::size_t alpha, double x, double w, Complex u, Complex) {
        overlap += w * std::conj(u) * analytic.value(alpha, x);
    });
    const Complex align = (std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0)) / norm;

    double total = 0.0;
    for_each_gauss_point(numeric, [&](std::size_t alpha, double x, double w, Complex u, Complex du) {
        total += w * (std::norm(align * u - analytic.value(alpha, x)) +
                      std::norm(align * du - analytic.derivative(alpha, x)));
    });
    return std::sqrt(total);
}

AnalyticFunction project_onto(const PiecewiseLinear& numeric, const std::vector<AnalyticFunction>& basis,
                              const Mesh& mesh) {
    (void)mesh;
    std::vector<Complex> coeff(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Complex s{};
        for_each_gauss_point(numeric, [&](std::size_t alpha, double x, double w, Complex u, Complex) {
            s += w * std::conj(basis[j].value(alpha, x)) * u;
        });
        coeff[j] = s;
    }
    double norm = 0.0;
    for (const Complex& a : coeff) norm += std::norm(a);
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (Complex& a : coeff) a /= norm;
    }
    auto combine = [basis, coeff](bool derivative) {
        return [basis, coeff, derivative](std::size_t alpha, double x) {
            Complex sum{};
            for (std::size_t j = 0; j < basis.size(); ++j) {
                sum += coeff[j] * (derivative ? basis[j].derivative(alpha, x) : basis[j].value(alpha, x));
            }
            return sum;
        };
    };
    return {combine(false), combine(true)};
}

}  // namespace selfadj
