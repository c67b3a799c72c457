#include "selfadj/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "selfadj/error.hpp"

namespace selfadj::oracles {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kBracketWidth = 1e-13;

AnalyticFunction real_function(std::function<double(double)> f, std::function<double(double)> df) {
    return {[f](std::size_t, double x) { return Complex(f(x)); },
            [df](std::size_t, double x) { return Complex(df(x)); }};
}

AnalyticFunction plane_wave(double k) {
    const double scale = 1.0 / std::sqrt(kTwoPi);
    return {[=](std::size_t, double x) { return scale * std::polar(1.0, -k * x); },
            [=](std::size_t, double x) { return Complex(0.0, -k) * scale * std::polar(1.0, -k * x); }};
}

AnalyticFunction constant_mode() {
    const double v = 1.0 / std::sqrt(kTwoPi);
    return real_function([v](double) { return v; }, [](double) { return 0.0; });
}

template <typename G, typename DG>
double bracketed_root(G&& g, DG&& dg, double lo, double hi, const std::string& branch) {
    double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) {
        throw Error(ErrorKind::RootBracketFailure, "no sign change on branch " + branch);
    }
    const double a = lo;
    const double b = hi;
    while (hi - lo > kBracketWidth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int step = 0; step < 2; ++step) {
        const double d = dg(x);
        if (d == 0.0) break;
        const double next = x - g(x) / d;
        if (!(next > a && next < b)) break;
        x = next;
    }
    return x;
}

}  // namespace

double robin_constant(double theta) { return std::tan(0.5 * theta); }

double robin_positive_residual(double c, double lambda_tilde) {
    const double t = kTwoPi * lambda_tilde;
    return (lambda_tilde * std::sin(t) + c * std::cos(t)) / (1.0 + lambda_tilde + std::abs(c));
}

double robin_negative_residual(double c, double mu) {
    return (mu * std::tanh(kTwoPi * mu) - c) / (1.0 + mu + std::abs(c));
}

OracleSpectrum quasi_periodic_spectrum(double eps, std::size_t count) {
    if (!std::isfinite(eps)) throw Error(ErrorKind::InvalidConfig, "quasi-periodic parameter is not finite");
    OracleSpectrum out;
    out.family = Family::QuasiPeriodic;
    out.parameter = eps;
    const auto reach = static_cast<long>(count) + 2 + static_cast<long>(std::ceil(std::abs(eps)));
    std::vector<long> modes;
    for (long n = -reach; n <= reach; ++n) modes.push_back(n);
    std::stable_sort(modes.begin(), modes.end(), [eps](long a, long b) {
        const double la = (static_cast<double>(a) + eps) * (static_cast<double>(a) + eps);
        const double lb = (static_cast<double>(b) + eps) * (static_cast<double>(b) + eps);
        return la < lb;
    });
    for (std::size_t j = 0; j < count; ++j) {
        const double k = static_cast<double>(modes[j]) + eps;
        out.eigenvalues.push_back(k * k);
        out.eigenfunctions.push_back(plane_wave(k));
    }
    return out;
}

OracleSpectrum classical_spectrum(Classical kind, std::size_t count) {
    OracleSpectrum out;
    const double s = 1.0 / std::sqrt(kPi);
    switch (kind) {
        case Classical::Dirichlet:
            out.family = Family::Dirichlet;
            for (std::size_t m = 1; out.eigenvalues.size() < count; ++m) {
                const double k = 0.5 * static_cast<double>(m);
                out.eigenvalues.push_back(k * k);
                out.eigenfunctions.push_back(real_function([=](double x) { return s * std::sin(k * x); },
                                                           [=](double x) { return s * k * std::cos(k * x); }));
            }
            break;
        case Classical::Neumann:
            out.family = Family::Neumann;
            for (std::size_t m = 0; out.eigenvalues.size() < count; ++m) {
                const double k = 0.5 * static_cast<double>(m);
                out.eigenvalues.push_back(k * k);
                out.eigenfunctions.push_back(m == 0 ? constant_mode()
                                                    : real_function([=](double x) { return s * std::cos(k * x); },
                                                                    [=](double x) { return -s * k * std::sin(k * x); }));
            }
            break;
        case Classical::Periodic:
            out.family = Family::Periodic;
            out.eigenvalues.push_back(0.0);
            out.eigenfunctions.push_back(constant_mode());
            for (std::size_t m = 1; out.eigenvalues.size() < count; ++m) {
                const double k = static_cast<double>(m);
                out.eigenvalues.push_back(k * k);
                out.eigenfunctions.push_back(real_function([=](double x) { return s * std::cos(k * x); },
                                                           [=](double x) { return -s * k * std::sin(k * x); }));
                if (out.eigenvalues.size() == count) break;
                out.eigenvalues.push_back(k * k);
                out.eigenfunctions.push_back(real_function([=](double x) { return s * std::sin(k * x); },
                                                           [=](double x) { return s * k * std::cos(k * x); }));
            }
            break;
    }
    out.eigenvalues.resize(count);
    out.eigenfunctions.resize(count);
    return out;
}

OracleSpectrum robin_interval_spectrum(double c, std::size_t count) {
    if (!std::isfinite(c)) throw Error(ErrorKind::InvalidConfig, "robin constant is not finite");
    OracleSpectrum out;
    out.family = Family::RobinInterval;
    out.parameter = c;
    if (count == 0) return out;

    if (c > 0.0) {
        // mu tanh(2 pi mu) = c; the left side increases from 0, so [0, c + 1 + sqrt(c)] brackets.
        auto q = [c](double mu) { return mu * std::tanh(kTwoPi * mu) - c; };
        auto dq = [](double mu) {
            const double ch = std::cosh(kTwoPi * mu);
            return std::tanh(kTwoPi * mu) + (std::isfinite(ch) ? kTwoPi * mu / (ch * ch) : 0.0);
        };
        const double mu = bracketed_root(q, dq, 0.0, c + 1.0 + std::sqrt(c), "negative");
        out.eigenvalues.push_back(-mu * mu);
        out.roots.push_back(mu);
        out.brackets.emplace_back(0.0, c + 1.0 + std::sqrt(c));
        // cosh(mu x) rescaled by exp(-2 pi mu) so that large mu does not overflow.
        const double norm = std::sqrt(kPi * std::exp(-4.0 * kPi * mu) + (1.0 - std::exp(-8.0 * kPi * mu)) / (8.0 * mu));
        out.eigenfunctions.push_back(real_function(
            [=](double x) { return 0.5 * (std::exp(mu * (x - kTwoPi)) + std::exp(-mu * (x + kTwoPi))) / norm; },
            [=](double x) {
                return 0.5 * mu * (std::exp(mu * (x - kTwoPi)) - std::exp(-mu * (x + kTwoPi))) / norm;
            }));
    } else if (c == 0.0) {
        out.eigenvalues.push_back(0.0);
        out.roots.push_back(0.0);
        out.brackets.emplace_back(0.0, 0.0);
        out.eigenfunctions.push_back(constant_mode());
    }

    auto g = [c](double t) { return t * std::sin(kTwoPi * t) + c * std::cos(kTwoPi * t); };
    auto dg = [c](double t) {
        return std::sin(kTwoPi * t) + kTwoPi * t * std::cos(kTwoPi * t) - kTwoPi * c * std::sin(kTwoPi * t);
    };
    for (std::size_t m = (c < 0.0 ? 0 : 1); out.eigenvalues.size() < count; ++m) {
        const double md = static_cast<double>(m);
        double lo = 0.0;
        double hi = 0.0;
        double root = 0.0;
        if (c > 0.0) {
            lo = (2.0 * md - 1.0) / 4.0;
            hi = md / 2.0;
            root = bracketed_root(g, dg, lo, hi, std::to_string(m));
        } else if (c < 0.0) {
            lo = md / 2.0;
            hi = (2.0 * md + 1.0) / 4.0;
            root = bracketed_root(g, dg, lo, hi, std::to_string(m));
        } else {
            lo = hi = root = md / 2.0;
        }
        out.eigenvalues.push_back(root * root);
        out.roots.push_back(root);
        out.brackets.emplace_back(lo, hi);
        const double norm = std::sqrt(kPi + std::sin(2.0 * kTwoPi * root) / (4.0 * root));
        out.eigenfunctions.push_back(real_function([=](double x) { return std::cos(root * x) / norm; },
                                                   [=](double x) { return -root * std::sin(root * x) / norm; }));
    }
    return out;
}

}  // namespace selfadj::oracles
