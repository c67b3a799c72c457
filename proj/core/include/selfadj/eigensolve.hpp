#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "selfadj/femassembly.hpp"
#include "selfadj/manifold.hpp"
#include "selfadj/types.hpp"

namespace selfadj {

inline constexpr double kTolEig = 1e-9;

struct SpectralResult {
    RVector eigenvalues;               // ascending
    CMatrix coefficients;              // column j: B-normalized eigenvector j
    std::vector<BoundaryTrace> traces; // filled when boundary functions are supplied
    RVector residuals;                 // |A x - lambda B x| / |B x|

    [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    /// Whether every residual is within tol * max(1, |lambda|).
    [[nodiscard]] bool residuals_within(double tol = kTolEig) const;
};

/// The k algebraically smallest eigenpairs of A x = lambda B x.
///
/// B = L L^H is factored in envelope form, C = L^{-1} A L^{-H} is reduced to
/// real tridiagonal form by Householder reflections and solved by implicit QL
/// (plus inverse iteration when k is small against |r|).
/// Throws Error{NotPositiveDefinite}, Error{ConvergenceFailure} or
/// Error{IndexOutOfRange} for k outside 1..|r|.
SpectralResult solve_pencil(const SpectralPencil& pencil, std::size_t k);
SpectralResult solve_pencil(const SpectralPencil& pencil, std::size_t k, const BoundaryFunctionSet& bfs);

/// Continuous piecewise-linear function given by node values per interval.
struct PiecewiseLinear {
    std::vector<std::vector<double>> nodes;   // x_0 .. x_{r+1}
    std::vector<std::vector<Complex>> values; // same shape

    [[nodiscard]] std::size_t interval_count() const noexcept { return nodes.size(); }
    [[nodiscard]] Complex value(std::size_t alpha, double x) const;
    /// Squared L2 norm, integrated exactly.
    [[nodiscard]] double norm_squared() const;
};

/// Throws Error{IndexOutOfRange}.
PiecewiseLinear reconstruct(const SpectralResult& result, std::size_t index, const Mesh& mesh,
                            const BoundaryFunctionSet& bfs);

/// Reference eigenfunction: value and derivative on interval alpha at x.
struct AnalyticFunction {
    std::function<Complex(std::size_t alpha, double x)> value;
    std::function<Complex(std::size_t alpha, double x)> derivative;
};

/// H1 distance after aligning the global phase of `numeric` to `analytic` and
/// scaling it to unit L2 norm. 5-point Gauss quadrature on every element.
double h1_error(const PiecewiseLinear& numeric, const AnalyticFunction& analytic, const Mesh& mesh);

/// Normalized L2 projection of `numeric` onto the span of the orthonormal
/// functions `basis`. Used as the reference inside a degenerate eigenspace.
AnalyticFunction project_onto(const PiecewiseLinear& numeric, const std::vector<AnalyticFunction>& basis,
                              const Mesh& mesh);

}  // namespace selfadj
