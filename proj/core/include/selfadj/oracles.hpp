#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "selfadj/eigensolve.hpp"

namespace selfadj::oracles {

// Reference spectra of -u'' = lambda u on [0, 2 pi].

enum class Family { Dirichlet, Neumann, Periodic, QuasiPeriodic, RobinInterval };

struct OracleSpectrum {
    Family family = Family::Dirichlet;
    double parameter = 0.0;  // epsilon or c
    std::vector<double> eigenvalues;              // ascending, with multiplicity
    std::vector<AnalyticFunction> eigenfunctions; // L2-normalized, one per eigenvalue

    // Robin only: the root behind each eigenvalue (lambda~ for lambda >= 0,
    // mu for lambda = -mu^2) and, for positive roots, the branch bracket.
    std::vector<double> roots;
    std::vector<std::pair<double, double>> brackets;
};

/// (n + eps)^2 over n in Z with eigenfunctions exp(-i (n + eps) x) / sqrt(2 pi).
/// Ties are ordered by increasing n.
OracleSpectrum quasi_periodic_spectrum(double eps, std::size_t count);

enum class Classical { Dirichlet, Neumann, Periodic };

/// dirichlet: m^2/4, m >= 1; neumann: m^2/4, m >= 0; periodic: m^2 (cos before sin).
OracleSpectrum classical_spectrum(Classical kind, std::size_t count);

/// psi'(0) = 0 and psi'(2 pi) = c psi(2 pi). Positive eigenvalues lambda~^2
/// solve lambda~ sin(2 pi lambda~) + c cos(2 pi lambda~) = 0, one per branch
/// between consecutive poles of tan; for c > 0 the single negative eigenvalue
/// -mu^2 solves mu tanh(2 pi mu) = c, i.e. exp(-4 pi mu) = (mu - c)/(mu + c).
/// Roots: bisection to a 1e-13 bracket then two Newton steps.
/// Throws Error{RootBracketFailure}.
OracleSpectrum robin_interval_spectrum(double c, std::size_t count);

/// Defining equations, for substitution checks.
double robin_positive_residual(double c, double lambda_tilde);
double robin_negative_residual(double c, double mu);

/// c = tan(theta / 2) for the robin_local(theta) boundary unitary.
double robin_constant(double theta);

}  // namespace selfadj::oracles
