#include "relspace/geometry.hpp"

#include "relspace/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace relspace {

ObjectCatalog::ObjectCatalog(std::vector<ObjectModel> models) {
  for (auto& m : models) add(std::move(m));
}

void ObjectCatalog::add(ObjectModel model) {
  if (model.id.empty()) throw Error(ErrorKind::InvalidArgument, "object id must not be empty");
  if ((model.extents.array() <= 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "object '" + model.id + "' has non-positive extents");
  }
  if (models_.contains(model.id)) {
    throw Error(ErrorKind::InvalidArgument, "duplicate object id '" + model.id + "'");
  }
  std::string id = model.id;
  models_.emplace(std::move(id), std::move(model));
}

const ObjectModel& ObjectCatalog::at(const std::string& id) const {
  if (const auto* m = find(id)) return *m;
  throw Error(ErrorKind::UnknownObject, "object '" + id + "' is not in the catalog");
}

const ObjectModel* ObjectCatalog::find(const std::string& id) const {
  auto it = models_.find(id);
  return it == models_.end() ? nullptr : &it->second;
}

std::vector<std::string> ObjectCatalog::ids() const {
  std::vector<std::string> out;
  out.reserve(models_.size());
  for (const auto& [id, _] : models_) out.push_back(id);
  return out;
}

double Pose::yaw() const {
  const Vec3 x = orientation * Vec3::UnitX();
  return std::atan2(x.y(), x.x());
}

Pose Pose::from_yaw(const Vec3& position, double yaw) {
  return {position, Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()))};
}

const ObjectInstance* Scene::find(const std::string& id) const {
  auto it = std::find_if(instances.begin(), instances.end(),
                         [&](const ObjectInstance& i) { return i.id == id; });
  return it == instances.end() ? nullptr : &*it;
}

ObjectInstance* Scene::find(const std::string& id) {
  auto it = std::find_if(instances.begin(), instances.end(),
                         [&](const ObjectInstance& i) { return i.id == id; });
  return it == instances.end() ? nullptr : &*it;
}

const Pose& Scene::pose(const std::string& id) const {
  if (const auto* inst = find(id)) return inst->pose;
  throw Error(ErrorKind::UnknownObject, "object '" + id + "' is not in the scene");
}

void Scene::set_pose(const std::string& id, const Pose& pose) {
  auto* inst = find(id);
  if (inst == nullptr) throw Error(ErrorKind::UnknownObject, "object '" + id + "' is not in the scene");
  inst->pose = pose;
}

void Scene::validate(const ObjectCatalog& catalog) const {
  std::set<std::string> seen;
  for (const auto& inst : instances) {
    if (!seen.insert(inst.id).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate instance id '" + inst.id + "'");
    }
    if (!catalog.contains(inst.id)) {
      throw Error(ErrorKind::UnknownObject, "instance '" + inst.id + "' has no object model");
    }
    if (std::abs(inst.pose.orientation.norm() - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument, "orientation of '" + inst.id + "' is not a unit quaternion");
    }
  }
}

bool Aabb::contains(const Vec3& p, double tol) const {
  return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
}

bool Aabb::contains(const Aabb& other, double tol) const {
  return contains(other.min, tol) && contains(other.max, tol);
}

bool Aabb::contains_xy(const Aabb& other, double tol) const {
  return other.min.x() >= min.x() - tol && other.min.y() >= min.y() - tol &&
         other.max.x() <= max.x() + tol && other.max.y() <= max.y() + tol;
}

bool Aabb::contains_xy(const Vec2& p, double tol) const {
  return p.x() >= min.x() - tol && p.y() >= min.y() - tol && p.x() <= max.x() + tol &&
         p.y() <= max.y() + tol;
}

Aabb Aabb::merged(const Aabb& other) const {
  return {min.cwiseMin(other.min), max.cwiseMax(other.max)};
}

double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  if (angle >= -pi && angle <= pi) return angle;
  double wrapped = std::remainder(angle, 2.0 * pi);
  // remainder() yields [-pi, pi]; -pi is kept as is.
  return wrapped;
}

double angle_difference(double a, double b) { return wrap_angle(a - b); }

std::array<Vec3, 8> box_corners(const ObjectModel& model, const Pose& pose) {
  const Vec3 half = 0.5 * model.extents;
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? half.x() : -half.x(), (i & 2) ? half.y() : -half.y(),
                     (i & 4) ? half.z() : -half.z());
    corners[static_cast<std::size_t>(i)] = pose.position + pose.orientation * local;
  }
  return corners;
}

Aabb world_aabb(const ObjectModel& model, const Pose& pose) {
  const auto corners = box_corners(model, pose);
  Aabb box{corners[0], corners[0]};
  for (const auto& c : corners) {
    box.min = box.min.cwiseMin(c);
    box.max = box.max.cwiseMax(c);
  }
  return box;
}

Aabb union_aabb(const Scene& scene, const ObjectCatalog& catalog,
                std::span<const std::string> ids) {
  if (ids.empty()) throw Error(ErrorKind::EmptyReferenceSet, "reference set is empty");
  std::optional<Aabb> box;
  for (const auto& id : ids) {
    const auto* inst = scene.find(id);
    if (inst == nullptr) throw Error(ErrorKind::UnknownObject, "object '" + id + "' is not in the scene");
    const Aabb b = world_aabb(catalog.at(id), inst->pose);
    box = box ? box->merged(b) : b;
  }
  return *box;
}

RelationFrame build_relation_frame(const Scene& scene, const ObjectCatalog& catalog,
                                   std::span<const std::string> references) {
  const Aabb box = union_aabb(scene, catalog, references);
  const Vec3 extent = box.extents();
  const Vec3 center = box.center();
  RelationFrame frame;
  frame.origin = Vec3(center.x(), center.y(), box.min.z());
  frame.horizontal_scale = std::max(kMinFrameScale, 0.5 * std::hypot(extent.x(), extent.y()));
  frame.vertical_scale = std::max(kMinFrameScale, extent.z());
  return frame;
}

CylCoords to_cylindrical(const RelationFrame& frame, const Vec3& world_point) {
  const Vec3 d = world_point - frame.origin;
  const double radius = std::hypot(d.x(), d.y());
  CylCoords c;
  c.r = radius / frame.horizontal_scale;
  c.phi = radius > 0.0 ? std::atan2(d.y(), d.x()) : 0.0;
  c.h = d.z() / frame.vertical_scale;
  return c;
}

Vec3 from_cylindrical(const RelationFrame& frame, const CylCoords& c) {
  const double radius = c.r * frame.horizontal_scale;
  return frame.origin +
         Vec3(radius * std::cos(c.phi), radius * std::sin(c.phi), c.h * frame.vertical_scale);
}

}  // namespace relspace
