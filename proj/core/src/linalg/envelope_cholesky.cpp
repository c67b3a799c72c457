#include "selfadj/linalg/envelope_cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "selfadj/error.hpp"

namespace selfadj::linalg {

EnvelopeCholesky::EnvelopeCholesky(const HermitianBandBorder& matrix) {
    const std::size_t n = matrix.size();
    first_.resize(n);
    offset_.resize(n + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        first_[i] = matrix.first_in_row(i);
        offset_[i] = total;
        total += i - first_[i] + 1;
    }
    offset_[n] = total;
    values_.assign(total, Complex{});
    min_pivot_ = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        Complex* row_i = values_.data() + offset_[i];
        const std::size_t fi = first_[i];
        for (std::size_t j = fi; j < i; ++j) {
            const Complex* row_j = values_.data() + offset_[j];
            const std::size_t fj = first_[j];
            Complex sum = matrix(i, j);
            for (std::size_t k = std::max(fi, fj); k < j; ++k) {
                sum -= row_i[k - fi] * std::conj(row_j[k - fj]);
            }
            row_i[j - fi] = sum / row_j[j - fj].real();
        }
        double pivot = matrix(i, i).real();
        for (std::size_t k = fi; k < i; ++k) pivot -= std::norm(row_i[k - fi]);
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            throw Error(ErrorKind::NotPositiveDefinite,
                        "Cholesky pivot " + std::to_string(i) + " is not positive");
        }
        min_pivot_ = std::min(min_pivot_, pivot);
        row_i[i - fi] = std::sqrt(pivot);
    }
}

Complex EnvelopeCholesky::at(std::size_t i, std::size_t j) const {
    if (j > i || j < first_.at(i)) return {};
    return values_[offset_[i] + (j - first_[i])];
}

void EnvelopeCholesky::solve_lower(Eigen::Ref<CVector> x) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex* row = values_.data() + offset_[i];
        const std::size_t fi = first_[i];
        Complex sum = x[static_cast<Eigen::Index>(i)];
        for (std::size_t k = fi; k < i; ++k) sum -= row[k - fi] * x[static_cast<Eigen::Index>(k)];
        x[static_cast<Eigen::Index>(i)] = sum / row[i - fi].real();
    }
}

void EnvelopeCholesky::solve_upper(Eigen::Ref<CVector> x) const {
    const std::size_t n = size();
    for (std::size_t ii = n; ii-- > 0;) {
        const Complex* row = values_.data() + offset_[ii];
        const std::size_t fi = first_[ii];
        const Complex xi = x[static_cast<Eigen::Index>(ii)] / row[ii - fi].real();
        x[static_cast<Eigen::Index>(ii)] = xi;
        for (std::size_t k = fi; k < ii; ++k) x[static_cast<Eigen::Index>(k)] -= std::conj(row[k - fi]) * xi;
    }
}

}  // namespace selfadj::linalg
