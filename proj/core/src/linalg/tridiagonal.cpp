#include "selfadj/linalg/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <cstdint>
#include <string>

#include "selfadj/error.hpp"

namespace selfadj::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double with_sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Implicit QL with Wilkinson-type shifts on (d, e), e[i] coupling i and i+1,
// e.size() == d.size() with a trailing zero. Rotations are accumulated into z
// when given.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd* z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    const std::size_t cap = 50 * n;
    std::size_t iterations = 0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m == l) break;
            if (++iterations > cap) {
                throw Error(ErrorKind::ConvergenceFailure,
                            "implicit QL exceeded " + std::to_string(cap) + " iterations");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + with_sign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z != nullptr) {
                    auto zi = z->col(static_cast<Eigen::Index>(i));
                    auto zi1 = z->col(static_cast<Eigen::Index>(i + 1));
                    for (Eigen::Index k = 0; k < z->rows(); ++k) {
                        f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

std::vector<double> padded_off(const SymmetricTridiagonal& t) {
    std::vector<double> e(t.size(), 0.0);
    std::copy(t.off.begin(), t.off.end(), e.begin());
    return e;
}

// Tridiagonal LU with partial pivoting of (T - shift I), the layout used by
// LAPACK's gttrf: dl multipliers, d pivots, du and du2 first and second
// superdiagonals of U.
struct PivotedLU {
    std::vector<double> dl, d, du, du2;
    std::vector<char> swapped;

    PivotedLU(const SymmetricTridiagonal& t, double shift, double tiny) {
        const std::size_t n = t.size();
        d.resize(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
        dl.assign(t.off.begin(), t.off.end());
        du.assign(t.off.begin(), t.off.end());
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped.assign(n > 0 ? n - 1 : 0, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        for (double& pivot : d) {
            if (std::abs(pivot) < tiny) pivot = pivot < 0.0 ? -tiny : tiny;
        }
    }

    void solve(Eigen::VectorXd& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            if (swapped[i] == 0) {
                b[ii + 1] -= dl[i] * b[ii];
            } else {
                const double temp = b[ii];
                b[ii] = b[ii + 1];
                b[ii + 1] = temp - dl[i] * b[ii];
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            const auto ii = static_cast<Eigen::Index>(i);
            double v = b[ii];
            if (i + 1 < n) v -= du[i] * b[ii + 1];
            if (i + 2 < n) v -= du2[i] * b[ii + 2];
            b[ii] = v / d[i];
        }
    }
};

}  // namespace

double SymmetricTridiagonal::one_norm() const {
    double norm = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double col = std::abs(diag[i]);
        if (i > 0) col += std::abs(off[i - 1]);
        if (i + 1 < n) col += std::abs(off[i]);
        norm = std::max(norm, col);
    }
    return norm;
}

std::vector<double> tridiagonal_eigenvalues(const SymmetricTridiagonal& t) {
    std::vector<double> d = t.diag;
    std::vector<double> e = padded_off(t);
    implicit_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

TridiagonalEigensystem tridiagonal_eigensystem(const SymmetricTridiagonal& t) {
    const auto n = static_cast<Eigen::Index>(t.size());
    std::vector<double> d = t.diag;
    std::vector<double> e = padded_off(t);
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
    implicit_ql(d, e, &z);

    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    TridiagonalEigensystem out;
    out.values.resize(d.size());
    out.vectors.resize(n, n);
    for (std::size_t j = 0; j < order.size(); ++j) {
        out.values[j] = d[order[j]];
        out.vectors.col(static_cast<Eigen::Index>(j)) = z.col(static_cast<Eigen::Index>(order[j]));
    }
    return out;
}

Eigen::MatrixXd tridiagonal_eigenvectors(const SymmetricTridiagonal& t, std::span<const double> values) {
    const auto n = static_cast<Eigen::Index>(t.size());
    const auto k = static_cast<Eigen::Index>(values.size());
    Eigen::MatrixXd vectors(n, k);
    if (n == 0 || k == 0) return vectors;

    const double norm = std::max(t.one_norm(), std::numeric_limits<double>::min());
    const double cluster_tol = 1e-3 * norm;
    const double perturb = 10.0 * kEps * norm;
    const double tiny = kEps * norm;

    // splitmix64: a start vector that is identical on every platform
    std::uint64_t state = 0x5eed5eedULL;
    auto uniform = [&state]() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    };

    Eigen::Index cluster_start = 0;
    double shift_prev = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        double shift = values[static_cast<std::size_t>(j)];
        if (j > 0) {
            if (shift - values[static_cast<std::size_t>(j - 1)] > cluster_tol) {
                cluster_start = j;
            } else if (shift - shift_prev < perturb) {
                shift = shift_prev + perturb;
            }
        }
        shift_prev = shift;

        const PivotedLU lu(t, shift, tiny);
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = uniform();

        auto orthogonalize = [&]() {
            for (Eigen::Index q = cluster_start; q < j; ++q) {
                x -= vectors.col(q).dot(x) * vectors.col(q);
            }
        };
        for (int iter = 0; iter < 3; ++iter) {
            orthogonalize();
            x /= x.norm();
            lu.solve(x);
        }
        orthogonalize();
        orthogonalize();
        x /= x.norm();
        vectors.col(j) = x;
    }
    return vectors;
}

}  // namespace selfadj::linalg
