#include "relspace/baselines.hpp"

#include "relspace/error.hpp"

namespace relspace {
namespace {

Vec3 direction(const Vec3& v) {
  const double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorKind::DegenerateDirection, "direction of a zero vector");
  return v / norm;
}

Vec3 reference_mean(const Scene& scene, const RelationCommand& command) {
  if (command.references.empty()) throw Error(ErrorKind::EmptyReferenceSet, "command has no references");
  Vec3 sum = Vec3::Zero();
  for (const auto& ref : command.references) sum += scene.pose(ref).position;
  return sum / static_cast<double>(command.references.size());
}

}  // namespace

Vec3 baseline_place(const std::string& relation_id, const Scene& scene,
                    const RelationCommand& command) {
  if ((relation_id == "between" || relation_id == "among") && command.references.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "'" + relation_id + "' needs at least two references");
  }
  const Vec3 pv = reference_mean(scene, command);
  const Vec3 pu = scene.pose(command.target).position;
  const Vec3 x = Vec3::UnitX();
  const Vec3 y = Vec3::UnitY();
  const Vec3 z = Vec3::UnitZ();

  if (relation_id == "right_of") return pv + 0.20 * x;
  if (relation_id == "left_of") return pv - 0.20 * x;
  if (relation_id == "behind") return pv + 0.20 * y;
  if (relation_id == "in_front_of") return pv - 0.20 * y;
  if (relation_id == "on_top_of") return pv + 0.10 * z;
  if (relation_id == "close_to") return pv + 0.10 * direction(pu - pv);
  if (relation_id == "far_from") return pv + 0.50 * direction(pu - pv);
  if (relation_id == "between") return pv;
  if (relation_id == "among") return pv + 0.10 * direction(pu - pv);
  if (relation_id == "closer") return pv + 0.5 * (pu - pv);
  if (relation_id == "farther_from") return pv + 2.0 * (pu - pv);
  if (relation_id == "other_side_of") return pv - (pu - pv);
  throw Error(ErrorKind::InvalidArgument, "no baseline for relation '" + relation_id + "'");
}

PlanResult baseline_plan(const Scene& scene, const ObjectCatalog& catalog,
                         const RelationCommand& command, const Workspace& workspace,
                         const PlanConfig& config) {
  config.validate();
  Candidate cand;
  cand.position = baseline_place(command.relation.id, scene, command);
  cand.verdict = check_feasible(scene, catalog, command.target, cand.position, workspace, config);
  cand.density = 1.0;

  PlanResult result;
  if (cand.verdict.feasible) {
    result.status = PlanStatus::Success;
    result.chosen = cand.verdict.placement;
    result.chosen_index = 0;
  } else {
    result.status = PlanStatus::NoFeasibleCandidate;
  }
  result.candidates.push_back(std::move(cand));
  return result;
}

}  // namespace relspace
