#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "selfadj/types.hpp"

namespace selfadj {

inline constexpr double kTolUnitary = 1e-12;
/// Eigenvalues within this distance of -1 are treated as exactly -1.
inline constexpr double kTolGap = 1e-8;

/// A validated boundary unitary U in U(2n) with its spectral data.
///
/// U encodes the self-adjoint boundary condition
///   phi - i dphi = U (phi + i dphi)
/// on endpoint values phi and outward normal derivatives dphi. With P_perp the
/// projector onto the -1 eigenspace and P = I - P_perp this is equivalent to
///   P dphi = A_U phi,  P_perp phi = 0,
/// where A_U is the partial Cayley transform.
class BoundaryUnitary {
public:
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }

    /// Eigenvalues ordered by phase theta in (-pi, pi].
    [[nodiscard]] const CVector& eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] const RVector& phases() const noexcept { return phases_; }
    [[nodiscard]] const CMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    [[nodiscard]] const CMatrix& minus_one_projector() const noexcept { return p_perp_; }
    [[nodiscard]] const CMatrix& invertibility_projector() const noexcept { return p_; }
    [[nodiscard]] const CMatrix& cayley() const noexcept { return cayley_; }

    /// Rank of P_perp: the number of Dirichlet-type directions.
    [[nodiscard]] std::size_t dirichlet_rank() const noexcept { return dirichlet_rank_; }

    /// Distance from -1 to the eigenvalues not classified as -1 (2 if none).
    [[nodiscard]] double gap() const noexcept { return gap_; }
    [[nodiscard]] bool has_gap() const noexcept { return gap_ > kTolGap; }

    /// Boundedness on H^{1/2} of the boundary. All boundary Sobolev spaces
    /// coincide with C^{2n} here, so every unitary qualifies.
    [[nodiscard]] bool is_admissible() const noexcept { return true; }

private:
    friend BoundaryUnitary validate_unitary(const CMatrix& m, std::optional<std::size_t> expected_dim);

    CMatrix matrix_;
    CVector eigenvalues_;
    RVector phases_;
    CMatrix eigenvectors_;
    CMatrix p_perp_;
    CMatrix p_;
    CMatrix cayley_;
    std::size_t dirichlet_rank_ = 0;
    double gap_ = 2.0;
};

/// Throws Error{DimensionMismatch} for non-square/odd/unexpected dimension,
/// Error{NotUnitary} when max|M^H M - I| > kTolUnitary.
BoundaryUnitary validate_unitary(const CMatrix& m, std::optional<std::size_t> expected_dim = std::nullopt);

/// A_U = sum over eigenvalues e^{i theta} away from -1 of -tan(theta/2) u u^H.
CMatrix partial_cayley(const BoundaryUnitary& u);

// -- presets ----------------------------------------------------------------

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

namespace presets {
struct Dirichlet {};
struct Neumann {};
/// diag(e^{i beta_l}); beta_l = pi puts endpoint l under a Dirichlet condition.
struct Robin {
    std::vector<double> beta;
};
/// Swap U_lm = U_ml = 1 for every matched pair (l, m).
struct Periodic {
    Pairing pairing;
};
/// U_lm = e^{i alpha}, U_ml = e^{-i alpha} for every matched pair (l, m):
/// psi(l) = e^{i alpha} psi(m) together with the same relation on derivatives.
struct QuasiPeriodic {
    Pairing pairing;
    double alpha = 0.0;
};
/// Single interval: diag(1, e^{-i theta}), i.e. psi'(a) = 0 and
/// psi'(b) = tan(theta/2) psi(b).
struct RobinLocal {
    double theta = 0.0;
};
}  // namespace presets

using BoundaryPreset = std::variant<presets::Dirichlet, presets::Neumann, presets::Robin, presets::Periodic,
                                    presets::QuasiPeriodic, presets::RobinLocal>;

/// Throws Error{InvalidPairing} for a pairing that is not a perfect matching
/// of 0..dim-1, Error{DimensionMismatch} for inconsistent sizes.
CMatrix preset_matrix(const BoundaryPreset& preset, std::size_t boundary_dim);
BoundaryUnitary preset(const BoundaryPreset& preset, std::size_t boundary_dim);

// -- boundary equation --------------------------------------------------------

struct BoundaryResidual {
    double full = 0.0;        // |(phi - i dphi) - U (phi + i dphi)|_2
    double cayley = 0.0;      // |P dphi - A_U phi|_2
    double dirichlet = 0.0;   // |P_perp phi|_2
};

BoundaryResidual boundary_condition_residual(const BoundaryUnitary& u, const CVector& phi, const CVector& dphi);

// -- symmetry -----------------------------------------------------------------

/// Unitary representation v(g) of a finite group, or of a generating set, on
/// the boundary space.
class SymmetryRep {
public:
    explicit SymmetryRep(std::vector<CMatrix> elements);
    [[nodiscard]] const std::vector<CMatrix>& elements() const noexcept { return elements_; }
    [[nodiscard]] std::size_t dim() const noexcept;

private:
    std::vector<CMatrix> elements_;
};

struct CommutantReport {
    bool invariant = true;
    double max_commutator = 0.0;   // max over g of max|v(g) U - U v(g)|
    std::size_t worst_element = 0;
    std::vector<double> commutators;
};

/// U defines a G-invariant extension iff it commutes with every v(g).
CommutantReport commutant_report(const BoundaryUnitary& u, const SymmetryRep& reps, double tol);
bool commutant_check(const BoundaryUnitary& u, const SymmetryRep& reps, double tol);

}  // namespace selfadj
