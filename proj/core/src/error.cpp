#include "selfadj/error.hpp"

namespace selfadj {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyManifold: return "EmptyManifold";
        case ErrorKind::DegenerateInterval: return "DegenerateInterval";
        case ErrorKind::NonPositiveMetric: return "NonPositiveMetric";
        case ErrorKind::ResolutionTooSmall: return "ResolutionTooSmall";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidPairing: return "InvalidPairing";
        case ErrorKind::SingularBoundaryMatrix: return "SingularBoundaryMatrix";
        case ErrorKind::PerturbationTooLarge: return "PerturbationTooLarge";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::RootBracketFailure: return "RootBracketFailure";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotUnitary:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::InvalidPairing:
        case ErrorKind::SingularBoundaryMatrix:
        case ErrorKind::PerturbationTooLarge:
            return 3;
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::IndexOutOfRange:
        case ErrorKind::RootBracketFailure:
            return 4;
        case ErrorKind::EmptyManifold:
        case ErrorKind::DegenerateInterval:
        case ErrorKind::NonPositiveMetric:
        case ErrorKind::ResolutionTooSmall:
        case ErrorKind::InvalidConfig:
            return 2;
    }
    return 2;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace selfadj
