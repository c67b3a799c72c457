#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "selfadj/types.hpp"

namespace selfadj::linalg {

/// Hermitian matrix that is tridiagonal except for a sparse "border" of
/// entries further from the diagonal. Only the lower triangle is stored, so
/// the matrix is Hermitian by construction and the diagonal is real.
class HermitianBandBorder {
public:
    HermitianBandBorder() = default;
    explicit HermitianBandBorder(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }

    /// Adds to entry (i, j), i >= j, and implicitly to (j, i) by conjugation.
    /// Diagonal updates take only the real part.
    void add_lower(std::size_t i, std::size_t j, Complex value);
    void set_diagonal(std::size_t i, double value);

    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const;

    /// Column index of the first structurally nonzero entry in row i (lower part).
    [[nodiscard]] std::size_t first_in_row(std::size_t i) const;

    [[nodiscard]] CMatrix to_dense() const;
    [[nodiscard]] CVector multiply(const CVector& x) const;

    /// Structural nonzeros of the full (not just lower) matrix.
    [[nodiscard]] std::size_t nonzeros() const;

    [[nodiscard]] const std::map<std::pair<std::size_t, std::size_t>, Complex>& border() const noexcept {
        return border_;
    }

private:
    std::vector<double> diag_;
    std::vector<Complex> sub_;  // (i+1, i)
    std::map<std::pair<std::size_t, std::size_t>, Complex> border_;  // (i, j) with i > j + 1
    std::vector<std::size_t> first_;
};

}  // namespace selfadj::linalg
