#include "selfadj/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "selfadj/error.hpp"
#include "selfadj/linalg/hermitian_eigen.hpp"

namespace selfadj {

namespace {

// Relative clustering threshold for the eigenvalues of the Hermitian and
// skew-Hermitian parts of U (both have norm <= 1).
constexpr double kTolCluster = 1e-9;

std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RVector& sorted_values) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= sorted_values.size(); ++i) {
        if (i == sorted_values.size() || sorted_values[i] - sorted_values[i - 1] > kTolCluster) {
            out.emplace_back(start, i - start);
            start = i;
        }
    }
    return out;
}

// Orthonormal eigenbasis of the normal matrix U: diagonalize the Hermitian
// part, then resolve each degenerate cluster with the skew part restricted to
// it, and once more with the Hermitian part inside any remaining cluster.
CMatrix normal_eigenbasis(const CMatrix& u) {
    const CMatrix herm = 0.5 * (u + u.adjoint());
    const CMatrix skew = (u - u.adjoint()) / (2.0 * kI);

    const linalg::HermitianEigen first = linalg::hermitian_eigen(herm);
    CMatrix basis = first.vectors;
    for (const auto& [start, size] : clusters(first.values)) {
        if (size < 2) continue;
        const CMatrix q = basis.middleCols(start, size);
        const linalg::HermitianEigen second = linalg::hermitian_eigen(q.adjoint() * skew * q);
        CMatrix refined = q * second.vectors;
        for (const auto& [s2, n2] : clusters(second.values)) {
            if (n2 < 2) continue;
            const CMatrix q2 = refined.middleCols(s2, n2);
            const linalg::HermitianEigen third = linalg::hermitian_eigen(q2.adjoint() * herm * q2);
            refined.middleCols(s2, n2) = q2 * third.vectors;
        }
        basis.middleCols(start, size) = refined;
    }
    return basis;
}

void check_pairing(const Pairing& pairing, std::size_t dim) {
    std::vector<int> seen(dim, 0);
    for (const auto& [l, m] : pairing) {
        if (l >= dim || m >= dim || l == m) {
            throw Error(ErrorKind::InvalidPairing,
                        "pair (" + std::to_string(l) + ", " + std::to_string(m) + ") is not valid for dimension " +
                            std::to_string(dim));
        }
        ++seen[l];
        ++seen[m];
    }
    for (std::size_t l = 0; l < dim; ++l) {
        if (seen[l] != 1) {
            throw Error(ErrorKind::InvalidPairing,
                        "endpoint " + std::to_string(l) + " is matched " + std::to_string(seen[l]) + " times");
        }
    }
}

}  // namespace

BoundaryUnitary validate_unitary(const CMatrix& m, std::optional<std::size_t> expected_dim) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch, "boundary matrix must be square with even dimension, got " +
                                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (expected_dim && static_cast<std::size_t>(m.rows()) != *expected_dim) {
        throw Error(ErrorKind::DimensionMismatch, "boundary matrix has dimension " + std::to_string(m.rows()) +
                                                      ", manifold needs " + std::to_string(*expected_dim));
    }
    if (!m.allFinite()) throw Error(ErrorKind::NotUnitary, "boundary matrix has non-finite entries");
    const Eigen::Index dim = m.rows();
    const double defect = max_abs(m.adjoint() * m - CMatrix::Identity(dim, dim));
    if (defect > kTolUnitary) {
        throw Error(ErrorKind::NotUnitary, "max|U^H U - I| = " + std::to_string(defect));
    }

    BoundaryUnitary out;
    out.matrix_ = m;
    CMatrix basis = normal_eigenbasis(m);

    CVector values(dim);
    RVector phases(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        values[j] = basis.col(j).dot(m * basis.col(j));
        phases[j] = std::arg(values[j]);
        if (phases[j] <= -kPi) phases[j] = kPi;
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return phases[a] < phases[b]; });

    out.eigenvalues_.resize(dim);
    out.phases_.resize(dim);
    out.eigenvectors_.resize(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.eigenvalues_[j] = values[src];
        out.phases_[j] = phases[src];
        out.eigenvectors_.col(j) = basis.col(src);
    }

    out.p_perp_ = CMatrix::Zero(dim, dim);
    out.cayley_ = CMatrix::Zero(dim, dim);
    out.gap_ = 2.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto v = out.eigenvectors_.col(j);
        const double distance = std::abs(out.eigenvalues_[j] + 1.0);
        if (distance <= kTolGap) {
            out.p_perp_ += v * v.adjoint();
            ++out.dirichlet_rank_;
        } else {
            out.gap_ = std::min(out.gap_, distance);
            out.cayley_ += (-std::tan(0.5 * out.phases_[j])) * (v * v.adjoint());
        }
    }
    out.p_perp_ = 0.5 * (out.p_perp_ + out.p_perp_.adjoint()).eval();
    out.cayley_ = 0.5 * (out.cayley_ + out.cayley_.adjoint()).eval();
    out.p_ = CMatrix::Identity(dim, dim) - out.p_perp_;
    return out;
}

CMatrix partial_cayley(const BoundaryUnitary& u) { return u.cayley(); }

CMatrix preset_matrix(const BoundaryPreset& preset, std::size_t boundary_dim) {
    const auto dim = static_cast<Eigen::Index>(boundary_dim);
    if (boundary_dim == 0 || boundary_dim % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch, "boundary dimension must be positive and even");
    }
    return std::visit(
        [&](const auto& p) -> CMatrix {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, presets::Dirichlet>) {
                return -CMatrix::Identity(dim, dim);
            } else if constexpr (std::is_same_v<P, presets::Neumann>) {
                return CMatrix::Identity(dim, dim);
            } else if constexpr (std::is_same_v<P, presets::Robin>) {
                if (p.beta.size() != boundary_dim) {
                    throw Error(ErrorKind::DimensionMismatch, "robin needs " + std::to_string(boundary_dim) +
                                                                  " angles, got " + std::to_string(p.beta.size()));
                }
                CMatrix m = CMatrix::Zero(dim, dim);
                for (Eigen::Index l = 0; l < dim; ++l) {
                    const double beta = p.beta[static_cast<std::size_t>(l)];
                    if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidConfig, "robin angle is not finite");
                    m(l, l) = std::polar(1.0, beta);
                }
                return m;
            } else if constexpr (std::is_same_v<P, presets::Periodic>) {
                check_pairing(p.pairing, boundary_dim);
                CMatrix m = CMatrix::Zero(dim, dim);
                for (const auto& [l, k] : p.pairing) {
                    m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = 1.0;
                    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 1.0;
                }
                return m;
            } else if constexpr (std::is_same_v<P, presets::QuasiPeriodic>) {
                check_pairing(p.pairing, boundary_dim);
                if (!std::isfinite(p.alpha)) throw Error(ErrorKind::InvalidConfig, "quasi-periodic angle is not finite");
                CMatrix m = CMatrix::Zero(dim, dim);
                for (const auto& [l, k] : p.pairing) {
                    m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = std::polar(1.0, p.alpha);
                    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = std::polar(1.0, -p.alpha);
                }
                return m;
            } else {
                static_assert(std::is_same_v<P, presets::RobinLocal>);
                if (boundary_dim != 2) {
                    throw Error(ErrorKind::DimensionMismatch, "robin_local is defined on a single interval");
                }
                if (!std::isfinite(p.theta)) throw Error(ErrorKind::InvalidConfig, "robin_local angle is not finite");
                CMatrix m = CMatrix::Zero(2, 2);
                m(0, 0) = 1.0;
                m(1, 1) = std::polar(1.0, -p.theta);
                return m;
            }
        },
        preset);
}

BoundaryUnitary preset(const BoundaryPreset& p, std::size_t boundary_dim) {
    return validate_unitary(preset_matrix(p, boundary_dim), boundary_dim);
}

BoundaryResidual boundary_condition_residual(const BoundaryUnitary& u, const CVector& phi, const CVector& dphi) {
    const auto dim = static_cast<Eigen::Index>(u.dim());
    if (phi.size() != dim || dphi.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "boundary data must have dimension " + std::to_string(dim));
    }
    BoundaryResidual r;
    r.full = ((phi - kI * dphi) - u.matrix() * (phi + kI * dphi)).norm();
    r.cayley = (u.invertibility_projector() * dphi - u.cayley() * phi).norm();
    r.dirichlet = (u.minus_one_projector() * phi).norm();
    return r;
}

SymmetryRep::SymmetryRep(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw Error(ErrorKind::InvalidConfig, "a representation needs at least one element");
    const Eigen::Index dim = elements_.front().rows();
    for (std::size_t g = 0; g < elements_.size(); ++g) {
        const CMatrix& v = elements_[g];
        if (v.rows() != dim || v.cols() != dim) {
            throw Error(ErrorKind::DimensionMismatch, "representation element " + std::to_string(g) +
                                                          " has inconsistent dimension");
        }
        if (max_abs(v.adjoint() * v - CMatrix::Identity(dim, dim)) > kTolUnitary) {
            throw Error(ErrorKind::NotUnitary, "representation element " + std::to_string(g) + " is not unitary");
        }
    }
}

std::size_t SymmetryRep::dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }

CommutantReport commutant_report(const BoundaryUnitary& u, const SymmetryRep& reps, double tol) {
    if (reps.dim() != u.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "representation acts on dimension " + std::to_string(reps.dim()) +
                                                      ", boundary unitary has " + std::to_string(u.dim()));
    }
    CommutantReport report;
    const CMatrix& m = u.matrix();
    for (std::size_t g = 0; g < reps.elements().size(); ++g) {
        const CMatrix& v = reps.elements()[g];
        const double c = max_abs(v * m - m * v);
        report.commutators.push_back(c);
        if (g == 0 || c > report.max_commutator) {
            report.max_commutator = c;
            report.worst_element = g;
        }
    }
    report.invariant = report.max_commutator <= tol;
    return report;
}

bool commutant_check(const BoundaryUnitary& u, const SymmetryRep& reps, double tol) {
    return commutant_report(u, reps, tol).invariant;
}

}  // namespace selfadj
