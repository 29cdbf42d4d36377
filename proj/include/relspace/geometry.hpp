#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relspace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Quat = Eigen::Quaterniond;

/// Box-shaped object model. `extents` are full side lengths in meters.
struct ObjectModel {
  std::string id;
  std::string name;
  Vec3 extents = Vec3::Ones();
};

/// Object models keyed by id.
class ObjectCatalog {
 public:
  ObjectCatalog() = default;
  explicit ObjectCatalog(std::vector<ObjectModel> models);

  void add(ObjectModel model);
  [[nodiscard]] const ObjectModel& at(const std::string& id) const;
  [[nodiscard]] const ObjectModel* find(const std::string& id) const;
  [[nodiscard]] bool contains(const std::string& id) const { return find(id) != nullptr; }
  [[nodiscard]] std::vector<std::string> ids() const;
  [[nodiscard]] std::size_t size() const { return models_.size(); }
  [[nodiscard]] const std::map<std::string, ObjectModel>& models() const { return models_; }

 private:
  std::map<std::string, ObjectModel> models_;
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  [[nodiscard]] double yaw() const;
  static Pose from_yaw(const Vec3& position, double yaw);
};

struct ObjectInstance {
  std::string id;
  Pose pose;
};

/// Object configuration at one instant. Instance order is preserved.
struct Scene {
  double timestamp = 0.0;
  std::vector<ObjectInstance> instances;

  [[nodiscard]] const ObjectInstance* find(const std::string& id) const;
  [[nodiscard]] ObjectInstance* find(const std::string& id);
  [[nodiscard]] const Pose& pose(const std::string& id) const;
  [[nodiscard]] bool contains(const std::string& id) const { return find(id) != nullptr; }
  void set_pose(const std::string& id, const Pose& pose);

  /// Throws InvalidArgument on duplicate ids, UnknownObject on ids missing from the catalog.
  void validate(const ObjectCatalog& catalog) const;
};

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  [[nodiscard]] Vec3 extents() const { return max - min; }
  [[nodiscard]] Vec3 center() const { return 0.5 * (min + max); }
  [[nodiscard]] bool contains(const Vec3& p, double tol = 0.0) const;
  [[nodiscard]] bool contains(const Aabb& other, double tol = 0.0) const;
  [[nodiscard]] bool contains_xy(const Aabb& other, double tol = 0.0) const;
  [[nodiscard]] bool contains_xy(const Vec2& p, double tol = 0.0) const;
  [[nodiscard]] Aabb merged(const Aabb& other) const;
  [[nodiscard]] Aabb translated(const Vec3& t) const { return {min + t, max + t}; }
};

/// Cylindrical coordinate system anchored at the reference objects.
/// Axes are the fixed world axes: x right, y behind, z up.
struct RelationFrame {
  Vec3 origin = Vec3::Zero();
  double horizontal_scale = 1.0;
  double vertical_scale = 1.0;
};

/// Normalized cylindrical coordinates: radius and height are in frame units.
struct CylCoords {
  double r = 0.0;
  double phi = 0.0;
  double h = 0.0;
};

inline constexpr double kMinFrameScale = 0.01;

/// Wraps an angle into [-pi, pi].
double wrap_angle(double angle);

/// Signed smallest difference a - b, in [-pi, pi].
double angle_difference(double a, double b);

/// The eight corners of the box at the given pose.
std::array<Vec3, 8> box_corners(const ObjectModel& model, const Pose& pose);

Aabb world_aabb(const ObjectModel& model, const Pose& pose);

/// Union AABB of the listed instances.
Aabb union_aabb(const Scene& scene, const ObjectCatalog& catalog,
                std::span<const std::string> ids);

RelationFrame build_relation_frame(const Scene& scene, const ObjectCatalog& catalog,
                                   std::span<const std::string> references);

CylCoords to_cylindrical(const RelationFrame& frame, const Vec3& world_point);
Vec3 from_cylindrical(const RelationFrame& frame, const CylCoords& c);

}  // namespace relspace
