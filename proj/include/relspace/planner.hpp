#pragma once

#include "relspace/directional_stats.hpp"
#include "relspace/geometry.hpp"
#include "relspace/relation_models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relspace {

/// Table surfaces (top face is the support height) and the allowed xy
/// placement region.
struct Workspace {
  std::vector<Aabb> tables;
  Aabb bounds;

  /// Throws InvalidArgument if table footprints overlap.
  void validate() const;
};

struct PlanConfig {
  std::size_t candidate_count = 50;
  double collision_margin = 0.025;
  std::size_t rotation_checks = 8;
  double support_snap = 0.02;
  std::uint64_t seed = 0;
  /// Rank by density in metric space (divides out the cylindrical Jacobian)
  /// instead of in normalized cylindrical space.
  bool rank_in_metric_space = false;

  void validate() const;
};

enum class RejectReason { None, OutOfBounds, Unsupported, Collision };

std::string_view to_string(RejectReason reason) noexcept;

struct Verdict {
  bool feasible = false;
  RejectReason reason = RejectReason::None;
  /// Candidate with z snapped onto its support (set when supported).
  Vec3 placement = Vec3::Zero();
  /// Object the target would collide with, when reason is Collision.
  std::string blocking_object;
};

enum class PlanStatus { Success, NoModel, NoFeasibleCandidate };

std::string_view to_string(PlanStatus status) noexcept;

struct Candidate {
  Vec3 position = Vec3::Zero();
  CylCoords coords;
  double density = 0.0;
  double log_density = 0.0;
  Verdict verdict;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoModel;
  std::optional<Vec3> chosen;
  std::optional<std::size_t> chosen_index;
  std::vector<Candidate> candidates;
};

Verdict check_feasible(const Scene& scene, const ObjectCatalog& catalog, const std::string& target,
                       const Vec3& candidate, const Workspace& workspace, const PlanConfig& config);

PlanResult plan(const Scene& scene, const ObjectCatalog& catalog, const RelationCommand& command,
                const RelationModel* model, const Workspace& workspace, const PlanConfig& config);

}  // namespace relspace
