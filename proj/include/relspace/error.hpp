#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relspace {

enum class ErrorKind {
  UnknownObject,
  EmptyReferenceSet,
  InvalidArgument,
  InsufficientSamples,
  DegenerateDirections,
  EmptyAccumulator,
  RelationMismatch,
  EmptySampleSet,
  NoRelationMatch,
  NoTargetMatch,
  InsufficientReferences,
  AmbiguousMatch,
  ObjectNotInScene,
  StorageFailure,
  CorruptSnapshot,
  DegenerateDirection,
  InfeasibleGeneration,
  NoCommandContext,
  NoModel,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (CLI, HTTP layer, tests) can branch on it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace relspace
