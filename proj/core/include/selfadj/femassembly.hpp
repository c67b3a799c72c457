#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "selfadj/boundary.hpp"
#include "selfadj/linalg/band_border.hpp"
#include "selfadj/manifold.hpp"
#include "selfadj/types.hpp"

namespace selfadj {

/// Position of every basis function inside the coefficient vector.
///
/// Interval alpha owns the contiguous block offset[alpha] .. offset[alpha] +
/// r_alpha - 1, whose entry k - 1 is the function attached to interior node
/// x_k. Node 1 carries the boundary function of endpoint a_alpha and node
/// r_alpha the one of endpoint b_alpha; the nodes in between carry hats.
struct BasisLayout {
    std::vector<std::size_t> offset;
    std::vector<std::size_t> interior;        // r_alpha
    std::vector<std::size_t> boundary_index;  // global index of beta^(l), l = 0..2n-1
    std::size_t dimension = 0;

    [[nodiscard]] bool is_boundary(std::size_t global) const;
};

BasisLayout basis_layout(const Mesh& mesh);

/// Piecewise-linear hat on nodes x_{k-1}, x_k, x_{k+1} of one interval.
struct BulkFunction {
    std::size_t interval;
    std::size_t node;  // k in 2..r_alpha-1
    std::size_t global_index;
    double left;
    double center;
    double right;
};

std::vector<BulkFunction> bulk_basis(const Mesh& mesh);

/// F V = C for the endpoint values V of the boundary functions.
struct BoundaryLinearSystem {
    CMatrix u;
    RVector steps;  // arc-length step h_l of the interval owning endpoint l
    CMatrix f;      // diag(1 - i/h) - U diag(1 + i/h)
    CMatrix c;      // -i (I + U) diag(1/h)
    CVector d;      // 1 + i/h
    CMatrix u0;     // U D conj(D)^{-1}
    double min_distance = 0.0;  // min |1 - lambda| over spec(U0)
    double kappa_bound = 0.0;   // (h_max/h_min) 2 / min_distance
    BasisLayout layout;         // empty when built from bare steps
};

/// Throws Error{DimensionMismatch}, and Error{SingularBoundaryMatrix} when 1 is
/// within 1e-12 of spec(U0) unless `allow_singular` is set (diagnostics only;
/// F cannot be solved then).
BoundaryLinearSystem boundary_system(const BoundaryUnitary& u, const Mesh& mesh, bool allow_singular = false);
BoundaryLinearSystem boundary_system(const BoundaryUnitary& u, const RVector& steps, bool allow_singular = false);

inline constexpr double kIllConditioned = 1e8;

/// Endpoint data of the boundary functions beta^(k).
///
/// S = diag(1/h) V is stored Hermitian, which is the Hermitian relation
/// (1/h_j) conj(V_jk) = (1/h_k) V_kj. V is rebuilt from S, so for equal steps
/// the relation holds bit for bit on V as well.
struct BoundaryFunctionSet {
    CMatrix v;
    CMatrix s;
    CMatrix derivs;  // -(1/h_l)(delta_lk - V_lk)
    RVector steps;
    CMatrix u;
    BasisLayout layout;
    double raw_residual = 0.0;  // max |F V - C| before symmetrization
    double condition = 0.0;     // kappa(F) from singular values
    bool ill_conditioned = false;
};

BoundaryFunctionSet solve_boundary_values(const BoundaryLinearSystem& sys);

struct PerturbationBounds {
    double delta_lambda_lower = 0.0;
    double kappa_estimate = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double constant = 0.0;  // C with |dX| <= C |dU|
    CVector derivative;     // d(D conj(D)^{-1})/dh per endpoint
};

/// Lower bound on how far an eigenvalue of U0 at 1 moves under the step
/// perturbation dh, with C taken as the inverse spectral gap of U0 around
/// that eigenvalue. Throws Error{PerturbationTooLarge} when the bound is not
/// positive, which includes min |dh| = 0.
PerturbationBounds perturbation_bounds(const BoundaryLinearSystem& sys, const RVector& dh);

/// Hermitian pencil (A, B); both are tridiagonal plus a border that couples
/// the boundary functions with one another.
struct SpectralPencil {
    linalg::HermitianBandBorder a;
    linalg::HermitianBandBorder b;
    [[nodiscard]] std::size_t dim() const noexcept { return a.size(); }
};

SpectralPencil assemble_pencil(const Mesh& mesh, const BoundaryFunctionSet& bfs);

struct BoundaryTrace {
    CVector phi;
    CVector dphi;
};

BoundaryTrace trace_of(const CVector& coefficients, const BoundaryFunctionSet& bfs);

/// Writes <prefix>F.csv, C.csv, V.csv, A.csv and B.csv with rows
/// (row, col, re, im); pencil files list stored nonzeros only.
void dump_csv(const std::string& prefix, const BoundaryLinearSystem& sys, const BoundaryFunctionSet& bfs,
              const SpectralPencil& pencil);

}  // namespace selfadj
