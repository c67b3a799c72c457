#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace selfadj::linalg {

/// Real symmetric tridiagonal matrix: diag[i] on the diagonal and off[i]
/// coupling rows i and i+1 (off has size n-1).
struct SymmetricTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
    [[nodiscard]] double one_norm() const;
};

/// Eigenvalues in ascending order by the implicit-shift QL iteration.
/// Throws Error{ConvergenceFailure} after 50 n iterations in total.
std::vector<double> tridiagonal_eigenvalues(const SymmetricTridiagonal& t);

struct TridiagonalEigensystem {
    std::vector<double> values;  // ascending
    Eigen::MatrixXd vectors;     // orthonormal columns
};

/// Full eigensystem by implicit QL with accumulated rotations.
TridiagonalEigensystem tridiagonal_eigensystem(const SymmetricTridiagonal& t);

/// Eigenvectors for selected (ascending) eigenvalues by inverse iteration.
/// Vectors whose eigenvalues lie within 1e-3 ||T||_1 of each other are
/// orthogonalized against one another.
Eigen::MatrixXd tridiagonal_eigenvectors(const SymmetricTridiagonal& t, std::span<const double> values);

}  // namespace selfadj::linalg
