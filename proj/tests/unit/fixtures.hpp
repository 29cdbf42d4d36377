#pragma once

#include "relspace/geometry.hpp"
#include "relspace/planner.hpp"
#include "relspace/relation_models.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace relspace;

inline ObjectCatalog small_catalog() {
  return ObjectCatalog({{"ref", "ref", Vec3::Constant(0.1)},
                        {"ref2", "ref2", Vec3::Constant(0.1)},
                        {"obj", "obj", Vec3::Constant(0.06)},
                        {"box", "box", Vec3(0.2, 0.2, 0.1)}});
}

inline Workspace table_workspace() {
  Workspace w;
  w.tables = {Aabb{Vec3(-1, -1, -0.1), Vec3(1, 1, 0)}};
  w.bounds = Aabb{Vec3(-1, -1, -0.1), Vec3(1, 1, 2)};
  return w;
}

inline Scene scene_with(std::initializer_list<std::pair<const char*, Vec3>> items, double t = 0.0) {
  Scene s;
  s.timestamp = t;
  for (const auto& [id, p] : items) s.instances.push_back({id, Pose::from_yaw(p, 0.0)});
  return s;
}

/// ref cube on the table at `ref_xy`, target cube parked at (0.6, 0.6) and
/// moved to `after` by the demonstration.
inline Demonstration demo_to(const std::string& relation, const Vec3& after, const Vec2& ref_xy = Vec2::Zero(),
                             double t = 0.0) {
  Demonstration d;
  d.scene_before = scene_with({{"ref", Vec3(ref_xy.x(), ref_xy.y(), 0.05)}, {"obj", Vec3(0.6, 0.6, 0.03)}}, t);
  d.command = {{relation, relation}, "obj", {"ref"}};
  d.scene_after = d.scene_before;
  d.scene_after.timestamp = t + 1.0;
  d.scene_after.set_pose("obj", Pose::from_yaw(after, 0.0));
  return d;
}

/// Demonstration whose target lands exactly on `c` in the reference frame.
inline Demonstration demo_at(const std::string& relation, const CylCoords& c, const Vec2& ref_xy = Vec2::Zero(),
                             double t = 0.0) {
  const auto catalog = small_catalog();
  Demonstration d = demo_to(relation, Vec3::Zero(), ref_xy, t);
  const std::vector<std::string> refs{"ref"};
  const RelationFrame f = build_relation_frame(d.scene_before, catalog, refs);
  d.scene_after.set_pose("obj", Pose::from_yaw(from_cylindrical(f, c), 0.0));
  return d;
}

}  // namespace fixtures
