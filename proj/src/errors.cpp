#include "ctmap/errors.hpp"

namespace ctmap {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyEdgeList: return "EmptyEdgeList";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::SegmentGraphMismatch: return "SegmentGraphMismatch";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotAPath: return "NotAPath";
    case ErrorKind::OutOfOrder: return "OutOfOrder";
    case ErrorKind::MapNotDefinedOnVertex: return "MapNotDefinedOnVertex";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::AttachMapNotInjective: return "AttachMapNotInjective";
    case ErrorKind::AttachTargetMissing: return "AttachTargetMissing";
    case ErrorKind::VertexIsRoot: return "VertexIsRoot";
    case ErrorKind::EndpointOutsideDomain: return "EndpointOutsideDomain";
    case ErrorKind::ConstantsNegative: return "ConstantsNegative";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::InconsistentBasepoint: return "InconsistentBasepoint";
    case ErrorKind::NormalFormFailure: return "NormalFormFailure";
    case ErrorKind::SubgroupBallEmpty: return "SubgroupBallEmpty";
    case ErrorKind::EntryOverflow: return "EntryOverflow";
    case ErrorKind::InvalidCoefficient: return "InvalidCoefficient";
    case ErrorKind::NotHyperbolicTiling: return "NotHyperbolicTiling";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ctmap
