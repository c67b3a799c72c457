#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selfadj {

enum class ErrorKind {
    // manifold
    EmptyManifold,
    DegenerateInterval,
    NonPositiveMetric,
    ResolutionTooSmall,
    // boundary
    NotUnitary,
    DimensionMismatch,
    InvalidPairing,
    // femassembly
    SingularBoundaryMatrix,
    PerturbationTooLarge,
    // eigensolve
    NotPositiveDefinite,
    ConvergenceFailure,
    IndexOutOfRange,
    // oracles
    RootBracketFailure,
    // harness
    InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for the CLI: 2 config, 3 boundary data, 4 solver.
int exit_code_for(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace selfadj
