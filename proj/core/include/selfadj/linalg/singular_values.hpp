#pragma once

#include "selfadj/types.hpp"

namespace selfadj::linalg {

/// Singular values (descending) by one-sided Jacobi rotations, which keeps
/// small singular values accurate relative to their own size. Intended for
/// the small boundary matrices.
RVector singular_values(const CMatrix& matrix);

/// sigma_max / sigma_min in the spectral norm; +inf for a singular matrix.
double condition_number(const CMatrix& matrix);

/// Unitary factor of the polar decomposition M = W P, the unitary nearest
/// to M in every unitarily invariant norm. M must be nonsingular.
CMatrix nearest_unitary(const CMatrix& matrix);

}  // namespace selfadj::linalg
