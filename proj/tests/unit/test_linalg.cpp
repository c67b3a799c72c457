// The in-house linear algebra is checked against Eigen's dense solvers.
#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "generators.hpp"
#include "selfadj/error.hpp"
#include "selfadj/linalg/band_border.hpp"
#include "selfadj/linalg/envelope_cholesky.hpp"
#include "selfadj/linalg/hermitian_eigen.hpp"
#include "selfadj/linalg/singular_values.hpp"
#include "selfadj/linalg/tridiagonal.hpp"

using namespace selfadj;
using namespace selfadj::linalg;

namespace {

/// Random Hermitian band-border matrix; diagonally dominant when `spd`.
HermitianBandBorder random_band_border(gen::Engine& g, std::size_t n, std::size_t border, bool spd) {
    HermitianBandBorder m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m.add_lower(i + 1, i, gen::gaussian_complex(g));
    for (std::size_t b = 0; b < border; ++b) {
        const std::size_t i = gen::uniform_index(g, 2, n - 1);
        const std::size_t j = gen::uniform_index(g, 0, i - 2);
        m.add_lower(i, j, gen::gaussian_complex(g));
    }
    const CMatrix dense = m.to_dense();
    for (std::size_t i = 0; i < n; ++i) {
        const double row = dense.row(static_cast<Eigen::Index>(i)).cwiseAbs().sum();
        m.set_diagonal(i, spd ? row + gen::uniform(g, 0.1, 1.0) : gen::uniform(g, -2.0, 2.0));
    }
    return m;
}

}  // namespace

TEST(BandBorder, DenseAndMultiplyAgree) {
    gen::Engine g(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = gen::uniform_index(g, 3, 40);
        const HermitianBandBorder m = random_band_border(g, n, 6, false);
        const CMatrix d = m.to_dense();
        EXPECT_EQ(max_abs(d - d.adjoint()), 0.0);
        const CVector x = gen::random_vector(g, static_cast<Eigen::Index>(n));
        EXPECT_LE(max_abs(m.multiply(x) - d * x), 1e-12 * (1.0 + max_abs(d) * x.norm()));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(m(i, j), d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            }
        }
    }
}

TEST(BandBorder, NonzeroCount) {
    HermitianBandBorder m(5);
    for (std::size_t i = 0; i < 5; ++i) m.set_diagonal(i, 1.0);
    for (std::size_t i = 0; i + 1 < 5; ++i) m.add_lower(i + 1, i, 1.0);
    m.add_lower(4, 0, Complex(0.0, 1.0));
    EXPECT_EQ(m.nonzeros(), 5u + 8u + 2u);
    EXPECT_EQ(m.first_in_row(4), 0u);
    EXPECT_EQ(m(0, 4), Complex(0.0, -1.0));
}

TEST(EnvelopeCholesky, MatchesDenseFactor) {
    gen::Engine g(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = gen::uniform_index(g, 3, 60);
        const HermitianBandBorder m = random_band_border(g, n, 5, true);
        const EnvelopeCholesky chol(m);
        const CMatrix d = m.to_dense();
        const Eigen::LLT<CMatrix> ref(d);
        const CMatrix l_ref = ref.matrixL();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                EXPECT_NEAR(std::abs(chol.at(i, j) - l_ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                            0.0, 1e-10 * (1.0 + max_abs(d)));
            }
        }
        CVector x = gen::random_vector(g, static_cast<Eigen::Index>(n));
        const CVector rhs = x;
        chol.solve_lower(x);
        chol.solve_upper(x);
        EXPECT_LE((d * x - rhs).norm(), 1e-10 * rhs.norm() * (1.0 + max_abs(d)));
    }
}

TEST(EnvelopeCholesky, RejectsIndefinite) {
    HermitianBandBorder m(3);
    m.set_diagonal(0, 1.0);
    m.set_diagonal(1, -1.0);
    m.set_diagonal(2, 1.0);
    try {
        EnvelopeCholesky c(m);
        FAIL() << "indefinite matrix factored";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
    }
}

TEST(Tridiagonal, EigenvaluesMatchEigen) {
    gen::Engine g(13);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = gen::uniform_index(g, 1, 80);
        SymmetricTridiagonal t;
        for (std::size_t i = 0; i < n; ++i) t.diag.push_back(gen::uniform(g, -3.0, 3.0));
        for (std::size_t i = 0; i + 1 < n; ++i) t.off.push_back(gen::uniform(g, -1.0, 1.0));
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = t.diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto a = static_cast<Eigen::Index>(i);
            dense(a + 1, a) = dense(a, a + 1) = t.off[i];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(dense);
        const std::vector<double> vals = tridiagonal_eigenvalues(t);
        const TridiagonalEigensystem sys = tridiagonal_eigensystem(t);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(vals[i], ref.eigenvalues()[static_cast<Eigen::Index>(i)], 1e-12 * t.one_norm());
            EXPECT_NEAR(sys.values[i], ref.eigenvalues()[static_cast<Eigen::Index>(i)], 1e-12 * t.one_norm());
        }
        EXPECT_LE((dense * sys.vectors - sys.vectors * Eigen::Map<const Eigen::VectorXd>(
                                                            sys.values.data(), static_cast<Eigen::Index>(n))
                                                            .asDiagonal())
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-11 * t.one_norm());

        // Inverse iteration on a few of the lowest values.
        const std::size_t k = std::min<std::size_t>(n, 4);
        const Eigen::MatrixXd vecs = tridiagonal_eigenvectors(t, std::span<const double>(vals.data(), k));
        for (std::size_t j = 0; j < k; ++j) {
            const auto c = static_cast<Eigen::Index>(j);
            EXPECT_LE((dense * vecs.col(c) - vals[j] * vecs.col(c)).norm(), 1e-10 * t.one_norm());
            EXPECT_NEAR(vecs.col(c).norm(), 1.0, 1e-12);
        }
    }
}

TEST(Tridiagonal, ClusteredEigenvectorsStayOrthogonal) {
    // Wilkinson-type matrix with nearly equal pairs.
    SymmetricTridiagonal t;
    const int m = 10;
    for (int i = -m; i <= m; ++i) t.diag.push_back(std::abs(i));
    t.off.assign(t.diag.size() - 1, 1.0);
    const std::vector<double> vals = tridiagonal_eigenvalues(t);
    const std::size_t k = vals.size();
    const Eigen::MatrixXd v = tridiagonal_eigenvectors(t, vals);
    const Eigen::MatrixXd gram = v.transpose() * v;
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-8);
}

TEST(HermitianEigen, MatchesEigen) {
    gen::Engine g(14);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = static_cast<Eigen::Index>(gen::uniform_index(g, 1, 50));
        const CMatrix h = gen::random_hermitian(g, n);
        const HermitianEigen mine = hermitian_eigen(h);
        const Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
        EXPECT_LE((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11 * (1.0 + max_abs(h) * n));
        EXPECT_LE(max_abs(h * mine.vectors - mine.vectors * mine.values.asDiagonal()), 1e-10 * (1.0 + max_abs(h) * n));
        EXPECT_LE(max_abs(mine.vectors.adjoint() * mine.vectors - CMatrix::Identity(n, n)), 1e-12 * n);

        const std::size_t k = static_cast<std::size_t>(std::min<Eigen::Index>(n, 3));
        const HermitianEigen low = hermitian_eigen_lowest(h, k);
        ASSERT_EQ(low.values.size(), static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j) {
            EXPECT_NEAR(low.values[static_cast<Eigen::Index>(j)], ref.eigenvalues()[static_cast<Eigen::Index>(j)],
                        1e-11 * (1.0 + max_abs(h) * n));
        }
    }
}

TEST(SingularValues, MatchJacobiSvd) {
    gen::Engine g(15);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<Eigen::Index>(gen::uniform_index(g, 1, 8));
        const CMatrix m = gen::gaussian_matrix(g, n, n);
        const RVector mine = singular_values(m);
        const Eigen::JacobiSVD<CMatrix> ref(m);
        EXPECT_LE((mine - ref.singularValues()).cwiseAbs().maxCoeff(), 1e-12 * ref.singularValues()[0]);
        EXPECT_NEAR(condition_number(m), ref.singularValues()[0] / ref.singularValues()[n - 1],
                    1e-9 * ref.singularValues()[0] / ref.singularValues()[n - 1]);
    }
    EXPECT_TRUE(std::isinf(condition_number(CMatrix::Zero(2, 2))));
}

TEST(SingularValues, NearestUnitaryIsPolarFactor) {
    gen::Engine g(16);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<Eigen::Index>(gen::uniform_index(g, 1, 8));
        const CMatrix m = gen::gaussian_matrix(g, n, n);
        const CMatrix w = nearest_unitary(m);
        const Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const CMatrix ref = svd.matrixU() * svd.matrixV().adjoint();
        EXPECT_LE(max_abs(w - ref), 1e-10);
        EXPECT_LE(max_abs(w.adjoint() * w - CMatrix::Identity(n, n)), 1e-13);
        // A unitary is its own polar factor.
        const CMatrix u = gen::haar_unitary(g, n);
        EXPECT_LE(max_abs(nearest_unitary(u) - u), 1e-13);
    }
}
