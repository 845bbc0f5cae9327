#include "hyperideal/errors.hpp"

namespace hyperideal {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonCollinear: return "NonCollinear";
        case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
        case ErrorCode::PointNotFinite: return "PointNotFinite";
        case ErrorCode::NotHyperideal: return "NotHyperideal";
        case ErrorCode::ProportionalNormals: return "ProportionalNormals";
        case ErrorCode::SegmentMissesBall: return "SegmentMissesBall";
        case ErrorCode::MissingHorosphere: return "MissingHorosphere";
        case ErrorCode::AtPole: return "AtPole";
        case ErrorCode::InadmissibleAngles: return "InadmissibleAngles";
        case ErrorCode::SolveDiverged: return "SolveDiverged";
        case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NotASphere: return "NotASphere";
        case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
        case ErrorCode::InvalidFace: return "InvalidFace";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::BoundaryCollapse: return "BoundaryCollapse";
        case ErrorCode::MaxIterations: return "MaxIterations";
        case ErrorCode::GluingMismatch: return "GluingMismatch";
        case ErrorCode::ContinuationStalled: return "ContinuationStalled";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

}  // namespace hyperideal
