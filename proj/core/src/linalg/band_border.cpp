#include "selfadj/linalg/band_border.hpp"

#include <algorithm>
#include <stdexcept>

namespace selfadj::linalg {

HermitianBandBorder::HermitianBandBorder(std::size_t n)
    : diag_(n, 0.0), sub_(n > 0 ? n - 1 : 0, Complex{}), first_(n) {
    for (std::size_t i = 0; i < n; ++i) first_[i] = i == 0 ? 0 : i - 1;
}

void HermitianBandBorder::add_lower(std::size_t i, std::size_t j, Complex value) {
    if (i < j || i >= size()) throw std::out_of_range("HermitianBandBorder::add_lower");
    if (i == j) {
        diag_[i] += value.real();
    } else if (i == j + 1) {
        sub_[j] += value;
    } else {
        border_[{i, j}] += value;
        first_[i] = std::min(first_[i], j);
    }
}

void HermitianBandBorder::set_diagonal(std::size_t i, double value) { diag_.at(i) = value; }

Complex HermitianBandBorder::operator()(std::size_t i, std::size_t j) const {
    if (i == j) return {diag_.at(i), 0.0};
    if (i < j) return std::conj((*this)(j, i));
    if (i == j + 1) return sub_.at(j);
    const auto it = border_.find({i, j});
    return it == border_.end() ? Complex{} : it->second;
}

std::size_t HermitianBandBorder::first_in_row(std::size_t i) const { return first_.at(i); }

CMatrix HermitianBandBorder::to_dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Complex v = sub_[static_cast<std::size_t>(i)];
        m(i + 1, i) = v;
        m(i, i + 1) = std::conj(v);
    }
    for (const auto& [ij, v] : border_) {
        const auto i = static_cast<Eigen::Index>(ij.first);
        const auto j = static_cast<Eigen::Index>(ij.second);
        m(i, j) = v;
        m(j, i) = std::conj(v);
    }
    return m;
}

CVector HermitianBandBorder::multiply(const CVector& x) const {
    const std::size_t n = size();
    if (static_cast<std::size_t>(x.size()) != n) throw std::invalid_argument("HermitianBandBorder::multiply");
    CVector y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = diag_[i] * x[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        y[ii + 1] += sub_[i] * x[ii];
        y[ii] += std::conj(sub_[i]) * x[ii + 1];
    }
    for (const auto& [ij, v] : border_) {
        const auto i = static_cast<Eigen::Index>(ij.first);
        const auto j = static_cast<Eigen::Index>(ij.second);
        y[i] += v * x[j];
        y[j] += std::conj(v) * x[i];
    }
    return y;
}

std::size_t HermitianBandBorder::nonzeros() const {
    std::size_t count = 0;
    for (double d : diag_) count += d != 0.0 ? 1 : 0;
    for (const Complex& s : sub_) count += s != Complex{} ? 2 : 0;
    for (const auto& [ij, v] : border_) count += v != Complex{} ? 2 : 0;
    return count;
}

}  // namespace selfadj::linalg
