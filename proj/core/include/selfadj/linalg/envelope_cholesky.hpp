#pragma once

#include <cstddef>
#include <vector>

#include "selfadj/linalg/band_border.hpp"
#include "selfadj/types.hpp"

namespace selfadj::linalg {

/// Cholesky factor B = L L^H of a Hermitian positive definite matrix held in
/// envelope (skyline) form: row i of L is stored from column first(i) to i.
/// The envelope of L equals the envelope of B, so a tridiagonal matrix with a
/// few border rows factors in time linear in its size.
class EnvelopeCholesky {
public:
    /// Throws Error{NotPositiveDefinite} when a pivot is not strictly positive.
    explicit EnvelopeCholesky(const HermitianBandBorder& matrix);

    [[nodiscard]] std::size_t size() const noexcept { return first_.size(); }
    [[nodiscard]] Complex at(std::size_t i, std::size_t j) const;  // L(i, j)

    /// In-place x <- L^{-1} x.
    void solve_lower(Eigen::Ref<CVector> x) const;
    /// In-place x <- L^{-H} x.
    void solve_upper(Eigen::Ref<CVector> x) const;

    [[nodiscard]] double min_pivot() const noexcept { return min_pivot_; }

private:
    std::vector<std::size_t> first_;
    std::vector<std::size_t> offset_;  // start of row i inside values_
    std::vector<Complex> values_;
    double min_pivot_ = 0.0;
};

}  // namespace selfadj::linalg
