#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctmap {

enum class ErrorKind {
  InvalidArgument,
  ParseError,
  EmptyEdgeList,
  DisconnectedGraph,
  SelfLoop,
  UnknownVertex,
  GraphTooLarge,
  SegmentGraphMismatch,
  EmptySet,
  NotAPath,
  OutOfOrder,
  MapNotDefinedOnVertex,
  CalibrationFailed,
  PreconditionViolated,
  AttachMapNotInjective,
  AttachTargetMissing,
  VertexIsRoot,
  EndpointOutsideDomain,
  ConstantsNegative,
  EmptyFamily,
  InconsistentBasepoint,
  NormalFormFailure,
  SubgroupBallEmpty,
  EntryOverflow,
  InvalidCoefficient,
  NotHyperbolicTiling,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so that front-ends can
// emit a machine-readable record without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace ctmap
