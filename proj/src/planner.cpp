#include "relspace/planner.hpp"

#include "relspace/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace relspace {
namespace {

// Upright box footprint: center, half extents and yaw in the xy plane.
struct Footprint {
  Vec2 center;
  Vec2 half;
  double yaw = 0.0;

  [[nodiscard]] std::array<Vec2, 2> axes() const {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {Vec2(c, s), Vec2(-s, c)};
  }

  [[nodiscard]] double radius_along(const Vec2& axis) const {
    const auto a = axes();
    return half.x() * std::abs(a[0].dot(axis)) + half.y() * std::abs(a[1].dot(axis));
  }
};

constexpr double kContactTolerance = 1e-9;

// Separating axis test on the four edge normals.
bool footprints_overlap(const Footprint& a, const Footprint& b) {
  const Vec2 d = b.center - a.center;
  const auto axes_a = a.axes();
  const auto axes_b = b.axes();
  for (const auto& axis : {axes_a[0], axes_a[1], axes_b[0], axes_b[1]}) {
    const double gap = std::abs(d.dot(axis)) - a.radius_along(axis) - b.radius_along(axis);
    if (gap >= -kContactTolerance) return false;
  }
  return true;
}

bool intervals_overlap(double a_min, double a_max, double b_min, double b_max) {
  return std::min(a_max, b_max) - std::max(a_min, b_min) > kContactTolerance;
}

Footprint footprint_of(const ObjectModel& model, const Pose& pose) {
  return {pose.position.head<2>(), 0.5 * model.extents.head<2>(), pose.yaw()};
}

}  // namespace

void Workspace::validate() const {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      const auto& a = tables[i];
      const auto& b = tables[j];
      const bool overlap = std::min(a.max.x(), b.max.x()) > std::max(a.min.x(), b.min.x()) &&
                           std::min(a.max.y(), b.max.y()) > std::max(a.min.y(), b.min.y());
      if (overlap) throw Error(ErrorKind::InvalidArgument, "table surfaces overlap in xy");
    }
  }
}

void PlanConfig::validate() const {
  if (candidate_count < 1) throw Error(ErrorKind::InvalidArgument, "candidate_count must be >= 1");
  if (rotation_checks < 1) throw Error(ErrorKind::InvalidArgument, "rotation_checks must be >= 1");
  if (!(collision_margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "collision_margin must be >= 0");
  if (!(support_snap >= 0.0)) throw Error(ErrorKind::InvalidArgument, "support_snap must be >= 0");
}

std::string_view to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::None: return "none";
    case RejectReason::OutOfBounds: return "out_of_bounds";
    case RejectReason::Unsupported: return "unsupported";
    case RejectReason::Collision: return "collision";
  }
  return "unknown";
}

std::string_view to_string(PlanStatus status) noexcept {
  switch (status) {
    case PlanStatus::Success: return "Success";
    case PlanStatus::NoModel: return "NoModel";
    case PlanStatus::NoFeasibleCandidate: return "NoFeasibleCandidate";
  }
  return "unknown";
}

Verdict check_feasible(const Scene& scene, const ObjectCatalog& catalog, const std::string& target,
                       const Vec3& candidate, const Workspace& workspace, const PlanConfig& config) {
  const ObjectModel& model = catalog.at(target);
  const auto* current = scene.find(target);
  const Quat orientation = current != nullptr ? current->pose.orientation : Quat::Identity();

  Verdict verdict;
  verdict.placement = candidate;

  const Aabb box = world_aabb(model, {candidate, orientation});
  if (!workspace.bounds.contains_xy(box)) {
    verdict.reason = RejectReason::OutOfBounds;
    return verdict;
  }

  // Nearest support surface under the candidate center within the snap distance.
  const Vec2 xy = candidate.head<2>();
  const double bottom = box.min.z();
  std::optional<double> support;
  auto consider = [&](double top) {
    const double gap = std::abs(bottom - top);
    if (gap > config.support_snap) return;
    if (!support || gap < std::abs(bottom - *support) ||
        (gap == std::abs(bottom - *support) && top > *support)) {
      support = top;
    }
  };
  for (const auto& table : workspace.tables) {
    if (table.contains_xy(xy)) consider(table.max.z());
  }
  for (const auto& inst : scene.instances) {
    if (inst.id == target) continue;
    const Aabb other = world_aabb(catalog.at(inst.id), inst.pose);
    if (other.contains_xy(xy)) consider(other.max.z());
  }
  if (!support) {
    verdict.reason = RejectReason::Unsupported;
    return verdict;
  }
  const double lift = *support - bottom;
  verdict.placement.z() += lift;
  const double z_min = box.min.z() + lift;
  const double z_max = box.max.z() + lift;

  Footprint probe = footprint_of(model, {verdict.placement, orientation});
  probe.half.array() += config.collision_margin;
  const double base_yaw = probe.yaw;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(config.rotation_checks);

  for (const auto& inst : scene.instances) {
    if (inst.id == target) continue;
    const ObjectModel& other_model = catalog.at(inst.id);
    const Aabb other = world_aabb(other_model, inst.pose);
    if (!intervals_overlap(z_min, z_max, other.min.z(), other.max.z())) continue;
    const Footprint obstacle = footprint_of(other_model, inst.pose);
    for (std::size_t k = 0; k < config.rotation_checks; ++k) {
      probe.yaw = base_yaw + step * static_cast<double>(k);
      if (footprints_overlap(probe, obstacle)) {
        verdict.reason = RejectReason::Collision;
        verdict.blocking_object = inst.id;
        return verdict;
      }
    }
  }

  verdict.feasible = true;
  return verdict;
}

PlanResult plan(const Scene& scene, const ObjectCatalog& catalog, const RelationCommand& command,
                const RelationModel* model, const Workspace& workspace, const PlanConfig& config) {
  config.validate();
  if (!scene.contains(command.target)) {
    throw Error(ErrorKind::UnknownObject, "target '" + command.target + "' is not in the scene");
  }
  for (const auto& ref : command.references) {
    if (!scene.contains(ref)) throw Error(ErrorKind::UnknownObject, "reference '" + ref + "' is not in the scene");
  }

  PlanResult result;
  if (model == nullptr || !model->theta) {
    result.status = PlanStatus::NoModel;
    return result;
  }
  const CylindricalDistribution& theta = *model->theta;
  const RelationFrame frame = build_relation_frame(scene, catalog, command.references);

  Rng rng(config.seed);
  result.candidates.reserve(config.candidate_count);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.candidate_count; ++i) {
    Candidate cand;
    cand.coords = sample(theta, rng);
    cand.position = from_cylindrical(frame, cand.coords);
    cand.verdict = check_feasible(scene, catalog, command.target, cand.position, workspace, config);

    const CylCoords at = cand.verdict.feasible ? to_cylindrical(frame, cand.verdict.placement) : cand.coords;
    cand.log_density = log_pdf(theta, at);
    if (config.rank_in_metric_space) {
      const double jacobian = frame.horizontal_scale * frame.horizontal_scale *
                              frame.vertical_scale * std::max(at.r, 1e-12);
      cand.log_density -= std::log(jacobian);
    }
    cand.density = std::exp(cand.log_density);

    if (cand.verdict.feasible && (!result.chosen_index || cand.log_density > best)) {
      best = cand.log_density;
      result.chosen_index = i;
    }
    result.candidates.push_back(std::move(cand));
  }

  if (result.chosen_index) {
    result.status = PlanStatus::Success;
    result.chosen = result.candidates[*result.chosen_index].verdict.placement;
  } else {
    result.status = PlanStatus::NoFeasibleCandidate;
  }
  return result;
}

}  // namespace relspace
