#include "selfadj/femassembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "selfadj/error.hpp"
#include "selfadj/io.hpp"
#include "selfadj/linalg/singular_values.hpp"

namespace selfadj {

namespace {

constexpr double kTolSingular = 1e-12;

void check_steps(const RVector& steps) {
    for (Eigen::Index l = 0; l < steps.size(); ++l) {
        if (!(steps[l] > 0.0) || !std::isfinite(steps[l])) {
            throw Error(ErrorKind::DimensionMismatch, "step of endpoint " + std::to_string(l) + " is not positive");
        }
    }
}

}  // namespace

bool BasisLayout::is_boundary(std::size_t global) const {
    return std::find(boundary_index.begin(), boundary_index.end(), global) != boundary_index.end();
}

BasisLayout basis_layout(const Mesh& mesh) {
    BasisLayout layout;
    const std::size_t n = mesh.interval_count();
    layout.offset.resize(n);
    layout.interior.resize(n);
    layout.boundary_index.resize(2 * n);
    std::size_t offset = 0;
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const std::size_t r = mesh.interior_nodes(alpha);
        layout.offset[alpha] = offset;
        layout.interior[alpha] = r;
        layout.boundary_index[2 * alpha] = offset;
        layout.boundary_index[2 * alpha + 1] = offset + r - 1;
        offset += r;
    }
    layout.dimension = offset;
    return layout;
}

std::vector<BulkFunction> bulk_basis(const Mesh& mesh) {
    const BasisLayout layout = basis_layout(mesh);
    std::vector<BulkFunction> out;
    out.reserve(layout.dimension - 2 * mesh.interval_count());
    for (std::size_t alpha = 0; alpha < mesh.interval_count(); ++alpha) {
        const std::size_t r = layout.interior[alpha];
        for (std::size_t k = 2; k + 1 <= r; ++k) {
            out.push_back({alpha, k, layout.offset[alpha] + k - 1, mesh.node(alpha, k - 1), mesh.node(alpha, k),
                           mesh.node(alpha, k + 1)});
        }
    }
    return out;
}

BoundaryLinearSystem boundary_system(const BoundaryUnitary& u, const RVector& steps, bool allow_singular) {
    const auto dim = static_cast<Eigen::Index>(u.dim());
    if (steps.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "boundary unitary has dimension " + std::to_string(dim) +
                                                      ", mesh has " + std::to_string(steps.size()) + " endpoints");
    }
    check_steps(steps);

    BoundaryLinearSystem sys;
    sys.u = u.matrix();
    sys.steps = steps;
    const CMatrix id = CMatrix::Identity(dim, dim);
    const RVector inv_h = steps.cwiseInverse();

    sys.d.resize(dim);
    CVector d_bar(dim);
    CVector ratio(dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        sys.d[l] = Complex(1.0, inv_h[l]);
        d_bar[l] = Complex(1.0, -inv_h[l]);
        ratio[l] = Complex(steps[l], 1.0) / Complex(steps[l], -1.0);
    }
    sys.f = CMatrix(d_bar.asDiagonal()) - sys.u * sys.d.asDiagonal();
    sys.c = -kI * (id + sys.u) * inv_h.asDiagonal();
    sys.u0 = sys.u * ratio.asDiagonal();

    const BoundaryUnitary u0 = validate_unitary(sys.u0);
    sys.min_distance = (CVector::Ones(dim) - u0.eigenvalues()).cwiseAbs().minCoeff();
    if (sys.min_distance <= kTolSingular && !allow_singular) {
        throw Error(ErrorKind::SingularBoundaryMatrix,
                    "1 lies within " + std::to_string(sys.min_distance) + " of spec(U0); perturb the steps");
    }
    sys.kappa_bound = sys.min_distance <= kTolSingular
                          ? std::numeric_limits<double>::infinity()
                          : (steps.maxCoeff() / steps.minCoeff()) * 2.0 / sys.min_distance;
    return sys;
}

BoundaryLinearSystem boundary_system(const BoundaryUnitary& u, const Mesh& mesh, bool allow_singular) {
    const std::vector<double> h = mesh.endpoint_steps();
    BoundaryLinearSystem sys = boundary_system(
        u, Eigen::Map<const RVector>(h.data(), static_cast<Eigen::Index>(h.size())), allow_singular);
    sys.layout = basis_layout(mesh);
    return sys;
}

BoundaryFunctionSet solve_boundary_values(const BoundaryLinearSystem& sys) {
    const Eigen::Index dim = sys.f.rows();
    BoundaryFunctionSet out;
    out.steps = sys.steps;
    out.u = sys.u;
    out.layout = sys.layout;

    const CMatrix raw = sys.f.fullPivLu().solve(sys.c);
    out.raw_residual = max_abs(sys.f * raw - sys.c);
    out.condition = linalg::condition_number(sys.f);
    out.ill_conditioned = !(out.condition <= kIllConditioned);

    const RVector inv_h = sys.steps.cwiseInverse();
    const CMatrix s_raw = inv_h.asDiagonal() * raw;
    out.s.resize(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        out.s(j, j) = s_raw(j, j).real();
        for (Eigen::Index i = j + 1; i < dim; ++i) {
            const Complex avg = 0.5 * (s_raw(i, j) + std::conj(s_raw(j, i)));
            out.s(i, j) = avg;
            out.s(j, i) = std::conj(avg);
        }
    }
    out.v = sys.steps.asDiagonal() * out.s;
    out.derivs = out.s;
    out.derivs.diagonal() -= inv_h.cast<Complex>();
    return out;
}

PerturbationBounds perturbation_bounds(const BoundaryLinearSystem& sys, const RVector& dh) {
    const Eigen::Index dim = sys.steps.size();
    if (dh.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "need one step perturbation per endpoint");
    }
    const double dh_min = dh.cwiseAbs().minCoeff();
    if (!(dh_min > 0.0)) throw Error(ErrorKind::PerturbationTooLarge, "min |dh| must be positive");

    PerturbationBounds out;
    out.derivative.resize(dim);
    RVector moduli(dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        const Complex hm = Complex(sys.steps[l], -1.0);
        out.derivative[l] = Complex(0.0, -2.0) / (hm * hm);
        moduli[l] = std::abs(out.derivative[l] * dh[l]);
    }
    out.sigma_min = moduli.minCoeff();
    out.sigma_max = moduli.maxCoeff();

    // Eigenvector sensitivity: inverse distance from the eigenvalue nearest
    // 1 to the rest of spec(U0).
    const BoundaryUnitary u0 = validate_unitary(sys.u0);
    const CVector& lambda = u0.eigenvalues();
    Eigen::Index nearest = 0;
    (CVector::Ones(dim) - lambda).cwiseAbs().minCoeff(&nearest);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double dist = std::abs(lambda[j] - lambda[nearest]);
        if (dist > 1e-9) gap = std::min(gap, dist);
    }
    out.constant = std::isfinite(gap) ? 1.0 / gap : 0.0;

    out.delta_lambda_lower = (out.sigma_min - out.constant * out.sigma_max * out.sigma_max) /
                             (1.0 + out.constant * out.sigma_max);
    if (!(out.delta_lambda_lower > 0.0)) {
        throw Error(ErrorKind::PerturbationTooLarge,
                    "lower bound " + std::to_string(out.delta_lambda_lower) + " is not positive");
    }
    out.kappa_estimate = (sys.steps.maxCoeff() / sys.steps.minCoeff()) / dh_min;
    return out;
}

SpectralPencil assemble_pencil(const Mesh& mesh, const BoundaryFunctionSet& bfs) {
    const BasisLayout layout = basis_layout(mesh);
    const std::size_t n = mesh.interval_count();
    const auto dim = static_cast<Eigen::Index>(2 * n);
    if (bfs.s.rows() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "boundary functions do not match the mesh");
    }
    const std::vector<double> h = mesh.endpoint_steps();

    SpectralPencil pencil{linalg::HermitianBandBorder(layout.dimension),
                          linalg::HermitianBandBorder(layout.dimension)};

    // Elements between two interior nodes: plain P1 element matrices.
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const double step = h[2 * alpha];
        const std::size_t base = layout.offset[alpha];
        for (std::size_t k = 0; k + 1 < layout.interior[alpha]; ++k) {
            const std::size_t i = base + k;
            pencil.a.add_lower(i, i, 1.0 / step);
            pencil.a.add_lower(i + 1, i + 1, 1.0 / step);
            pencil.a.add_lower(i + 1, i, -1.0 / step);
            pencil.b.add_lower(i, i, step / 3.0);
            pencil.b.add_lower(i + 1, i + 1, step / 3.0);
            pencil.b.add_lower(i + 1, i, step / 6.0);
        }
    }

    // The two end elements of every interval involve only boundary functions.
    // Their stiffness plus the trace term collapses to diag(1/h) - S; the mass
    // is (1/6)[2 V^H diag(h) V + diag(h) V + V^H diag(h) + 2 diag(h)].
    for (Eigen::Index b = 0; b < dim; ++b) {
        for (Eigen::Index a = 0; a <= b; ++a) {
            Complex stiff = -bfs.s(a, b);
            Complex gram{};
            for (Eigen::Index l = 0; l < dim; ++l) {
                gram += h[static_cast<std::size_t>(l)] * std::conj(bfs.v(l, a)) * bfs.v(l, b);
            }
            Complex mass = 2.0 * gram + h[static_cast<std::size_t>(a)] * bfs.v(a, b) +
                           h[static_cast<std::size_t>(b)] * std::conj(bfs.v(b, a));
            if (a == b) {
                stiff += 1.0 / h[static_cast<std::size_t>(a)];
                mass += 2.0 * h[static_cast<std::size_t>(a)];
            }
            mass /= 6.0;
            // (a, b) is the upper entry; store its conjugate in the lower triangle.
            const std::size_t ga = layout.boundary_index[static_cast<std::size_t>(a)];
            const std::size_t gb = layout.boundary_index[static_cast<std::size_t>(b)];
            if (ga == gb) {
                pencil.a.add_lower(ga, ga, stiff.real());
                pencil.b.add_lower(ga, ga, mass.real());
            } else if (ga > gb) {
                pencil.a.add_lower(ga, gb, stiff);
                pencil.b.add_lower(ga, gb, mass);
            } else {
                pencil.a.add_lower(gb, ga, std::conj(stiff));
                pencil.b.add_lower(gb, ga, std::conj(mass));
            }
        }
    }
    return pencil;
}

BoundaryTrace trace_of(const CVector& coefficients, const BoundaryFunctionSet& bfs) {
    if (bfs.layout.dimension == 0 || static_cast<std::size_t>(coefficients.size()) != bfs.layout.dimension) {
        throw Error(ErrorKind::DimensionMismatch, "coefficient vector does not match the basis");
    }
    const Eigen::Index dim = bfs.v.rows();
    CVector cb(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        cb[k] = coefficients[static_cast<Eigen::Index>(bfs.layout.boundary_index[static_cast<std::size_t>(k)])];
    }
    return {bfs.v * cb, bfs.derivs * cb};
}

namespace {

void write_dense(const std::string& path, const CMatrix& m) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path);
    out << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << i << ',' << j << ',' << format_real(m(i, j).real()) << ',' << format_real(m(i, j).imag()) << '\n';
        }
    }
}

void write_sparse(const std::string& path, const linalg::HermitianBandBorder& m) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path);
    out << "row,col,re,im\n";
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Row i: lower part from first_in_row, then the conjugated upper part.
        std::vector<std::size_t> cols;
        for (std::size_t j = m.first_in_row(i); j <= i; ++j) cols.push_back(j);
        if (i + 1 < n) cols.push_back(i + 1);
        for (const auto& [ij, v] : m.border()) {
            if (ij.second == i) cols.push_back(ij.first);
        }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        for (std::size_t j : cols) {
            const Complex v = m(i, j);
            if (v == Complex{}) continue;
            out << i << ',' << j << ',' << format_real(v.real()) << ',' << format_real(v.imag()) << '\n';
        }
    }
}

}  // namespace

void dump_csv(const std::string& prefix, const BoundaryLinearSystem& sys, const BoundaryFunctionSet& bfs,
              const SpectralPencil& pencil) {
    write_dense(prefix + "F.csv", sys.f);
    write_dense(prefix + "C.csv", sys.c);
    write_dense(prefix + "V.csv", bfs.v);
    write_sparse(prefix + "A.csv", pencil.a);
    write_sparse(prefix + "B.csv", pencil.b);
}

}  // namespace selfadj
