#include "selfadj/linalg/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace selfadj::linalg {

HouseholderTridiagonal::HouseholderTridiagonal(CMatrix matrix) : reflectors_(std::move(matrix)) {
    const Eigen::Index n = reflectors_.rows();
    t_.diag.assign(static_cast<std::size_t>(n), 0.0);
    t_.off.assign(n > 0 ? static_cast<std::size_t>(n - 1) : 0, 0.0);
    tau_.assign(n > 0 ? static_cast<std::size_t>(n - 1) : 0, Complex{});
    CVector w;

    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        const Eigen::Index m = n - j - 1;
        const Complex alpha = reflectors_(j + 1, j);
        auto x = reflectors_.col(j).tail(m - 1);
        const double xnorm = x.norm();
        Complex tau{};
        double beta = alpha.real();
        if (xnorm != 0.0 || alpha.imag() != 0.0) {
            beta = -std::copysign(std::hypot(alpha.real(), alpha.imag(), xnorm), alpha.real());
            tau = Complex((beta - alpha.real()) / beta, -alpha.imag() / beta);
            x *= Complex(1.0) / (alpha - beta);
        }
        t_.off[static_cast<std::size_t>(j)] = beta;
        tau_[static_cast<std::size_t>(j)] = tau;
        t_.diag[static_cast<std::size_t>(j)] = reflectors_(j, j).real();
        reflectors_(j + 1, j) = 1.0;

        if (tau != Complex{}) {
            auto v = reflectors_.col(j).tail(m);
            auto trailing = reflectors_.bottomRightCorner(m, m);
            w.noalias() = tau * (trailing.selfadjointView<Eigen::Lower>() * v);
            const Complex alpha2 = -0.5 * tau * w.dot(v);
            w += alpha2 * v;
            trailing.selfadjointView<Eigen::Lower>().rankUpdate(v, w, Complex(-1.0));
        }
    }
    if (n > 0) t_.diag[static_cast<std::size_t>(n - 1)] = reflectors_(n - 1, n - 1).real();
}

void HouseholderTridiagonal::apply_q(CMatrix& x) const {
    const Eigen::Index n = reflectors_.rows();
    CVector v;
    Eigen::Matrix<Complex, 1, Eigen::Dynamic> row;
    for (Eigen::Index j = n - 2; j >= 0; --j) {
        const Complex tau = tau_[static_cast<std::size_t>(j)];
        if (tau == Complex{}) continue;
        const Eigen::Index m = n - j - 1;
        v = reflectors_.col(j).tail(m);
        v[0] = 1.0;
        auto block = x.bottomRows(m);
        row.noalias() = v.adjoint() * block;
        block.noalias() -= (tau * v) * row;
    }
}

HermitianEigen hermitian_eigen(const CMatrix& matrix) {
    const Eigen::Index n = matrix.rows();
    HermitianEigen out;
    if (n == 0) return out;
    const HouseholderTridiagonal reduction(matrix);
    const TridiagonalEigensystem sys = tridiagonal_eigensystem(reduction.tridiagonal());
    out.values = Eigen::Map<const RVector>(sys.values.data(), n);
    out.vectors = sys.vectors.cast<Complex>();
    reduction.apply_q(out.vectors);
    return out;
}

HermitianEigen hermitian_eigen_lowest(CMatrix matrix, std::size_t count) {
    const auto n = static_cast<std::size_t>(matrix.rows());
    count = std::min(count, n);
    HermitianEigen out;
    if (count == 0) return out;
    const HouseholderTridiagonal reduction(std::move(matrix));
    const auto k = static_cast<Eigen::Index>(count);
    if (4 * count >= n) {
        const TridiagonalEigensystem sys = tridiagonal_eigensystem(reduction.tridiagonal());
        out.values = Eigen::Map<const RVector>(sys.values.data(), k);
        out.vectors = sys.vectors.leftCols(k).cast<Complex>();
    } else {
        const std::vector<double> all = tridiagonal_eigenvalues(reduction.tridiagonal());
        const std::span<const double> lowest(all.data(), count);
        out.values = Eigen::Map<const RVector>(lowest.data(), k);
        out.vectors = tridiagonal_eigenvectors(reduction.tridiagonal(), lowest).cast<Complex>();
    }
    reduction.apply_q(out.vectors);
    return out;
}

}  // namespace selfadj::linalg
