#include "relspace/error.hpp"

namespace relspace {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::EmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateDirections: return "DegenerateDirections";
    case ErrorKind::EmptyAccumulator: return "EmptyAccumulator";
    case ErrorKind::RelationMismatch: return "RelationMismatch";
    case ErrorKind::EmptySampleSet: return "EmptySampleSet";
    case ErrorKind::NoRelationMatch: return "NoRelationMatch";
    case ErrorKind::NoTargetMatch: return "NoTargetMatch";
    case ErrorKind::InsufficientReferences: return "InsufficientReferences";
    case ErrorKind::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorKind::ObjectNotInScene: return "ObjectNotInScene";
    case ErrorKind::StorageFailure: return "StorageFailure";
    case ErrorKind::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::InfeasibleGeneration: return "InfeasibleGeneration";
    case ErrorKind::NoCommandContext: return "NoCommandContext";
    case ErrorKind::NoModel: return "NoModel";
  }
  return "Unknown";
}

}  // namespace relspace
