#pragma once

#include <cstddef>
#include <vector>

#include "selfadj/linalg/tridiagonal.hpp"
#include "selfadj/types.hpp"

namespace selfadj::linalg {

/// Householder reduction Q^H H Q = T of a Hermitian matrix to real symmetric
/// tridiagonal form. Q = H_0 H_1 ... H_{n-2}, H_j = I - tau_j v_j v_j^H, with
/// v_j stored below the subdiagonal of `reflectors` (implicit leading 1).
class HouseholderTridiagonal {
public:
    /// Reads only the lower triangle of `matrix`, which is consumed.
    explicit HouseholderTridiagonal(CMatrix matrix);

    [[nodiscard]] const SymmetricTridiagonal& tridiagonal() const noexcept { return t_; }
    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }

    /// x <- Q x for every column of x.
    void apply_q(CMatrix& x) const;

private:
    CMatrix reflectors_;
    std::vector<Complex> tau_;
    SymmetricTridiagonal t_;
};

struct HermitianEigen {
    RVector values;   // ascending
    CMatrix vectors;  // orthonormal columns
};

/// Full eigendecomposition of a Hermitian matrix (lower triangle is read).
HermitianEigen hermitian_eigen(const CMatrix& matrix);

/// The `count` algebraically smallest eigenpairs.
HermitianEigen hermitian_eigen_lowest(CMatrix matrix, std::size_t count);

}  // namespace selfadj::linalg
