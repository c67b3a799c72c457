#include "selfadj/linalg/singular_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfadj/error.hpp"
#include "selfadj/linalg/hermitian_eigen.hpp"

namespace selfadj::linalg {

RVector singular_values(const CMatrix& matrix) {
    CMatrix a = matrix;
    const Eigen::Index cols = a.cols();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < cols; ++p) {
            for (Eigen::Index q = p + 1; q < cols; ++q) {
                const double alpha = a.col(p).squaredNorm();
                const double beta = a.col(q).squaredNorm();
                const Complex gamma = a.col(p).dot(a.col(q));
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const Complex phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                const CVector ap = a.col(p);
                const CVector bq = a.col(q) * std::conj(phase);
                a.col(p) = c * ap - s * bq;
                a.col(q) = (s * ap + c * bq) * phase;
            }
        }
        if (!rotated) break;
    }

    RVector sigma(cols);
    for (Eigen::Index j = 0; j < cols; ++j) sigma[j] = a.col(j).norm();
    std::sort(sigma.data(), sigma.data() + cols, std::greater<>());
    return sigma;
}

double condition_number(const CMatrix& matrix) {
    const RVector sigma = singular_values(matrix);
    if (sigma.size() == 0) return 1.0;
    const double smin = sigma[sigma.size() - 1];
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sigma[0] / smin;
}

CMatrix nearest_unitary(const CMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "polar decomposition needs a square matrix");
    }
    const CMatrix gram = matrix.adjoint() * matrix;
    const HermitianEigen eig = hermitian_eigen(gram);
    const double smin = eig.values.size() > 0 ? eig.values.minCoeff() : 1.0;
    if (!(smin > 0.0)) throw Error(ErrorKind::NotUnitary, "polar decomposition of a singular matrix");
    const RVector inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
    const CMatrix p_inv = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint();
    // The Gram matrix squares the condition number; Newton steps on the
    // polar factor restore unitarity to working precision.
    CMatrix x = matrix * p_inv;
    for (int step = 0; step < 2; ++step) x = 0.5 * (x + x.adjoint().inverse());
    return x;
}

}  // namespace selfadj::linalg
