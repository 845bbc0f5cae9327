#pragma once

#include <stdexcept>
#include <string>

namespace hyperideal {

enum class ErrorCode {
    NonCollinear,
    DegenerateConfiguration,
    PointNotFinite,
    NotHyperideal,
    ProportionalNormals,
    SegmentMissesBall,
    MissingHorosphere,
    AtPole,
    InadmissibleAngles,
    SolveDiverged,
    DegenerateSimplex,
    QuadratureNotConverged,
    OutOfDomain,
    NotASphere,
    NonManifoldEdge,
    InvalidFace,
    Infeasible,
    BoundaryCollapse,
    MaxIterations,
    GluingMismatch,
    ContinuationStalled,
    Parse,
};

const char* to_string(ErrorCode code);

/// Exception type used throughout the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hyperideal
