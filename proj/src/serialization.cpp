#include "relspace/serialization.hpp"

#include "relspace/error.hpp"

#include <fstream>
#include <sstream>

namespace relspace {

Json vec_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::InvalidArgument, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

namespace {

Json vec2_to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Vec2 vec2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidArgument, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json mat2_to_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Mat2 mat2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidArgument, "expected a 2x2 matrix");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    const Vec2 row = vec2_from_json(j[static_cast<std::size_t>(r)]);
    m(r, 0) = row.x();
    m(r, 1) = row.y();
  }
  return m;
}

Quat quat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::InvalidArgument, "expected [w,x,y,z]");
  Quat q(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
  const double norm = q.norm();
  if (!(norm > 1e-12)) throw Error(ErrorKind::InvalidArgument, "zero quaternion");
  // Files written by hand rarely carry unit quaternions to 1e-9.
  if (std::abs(norm - 1.0) > 1e-12) q.normalize();
  return q;
}

}  // namespace

void to_json(Json& j, const ObjectModel& m) {
  j = Json{{"id", m.id}, {"name", m.name}, {"extents_m", vec_to_json(m.extents)}};
}

void from_json(const Json& j, ObjectModel& m) {
  m.id = j.at("id").get<std::string>();
  m.name = j.value("name", m.id);
  m.extents = vec3_from_json(j.at("extents_m"));
}

void to_json(Json& j, const Scene& s) {
  Json instances = Json::array();
  for (const auto& inst : s.instances) {
    const Quat& q = inst.pose.orientation;
    instances.push_back({{"id", inst.id},
                         {"position_m", vec_to_json(inst.pose.position)},
                         {"orientation_wxyz", Json::array({q.w(), q.x(), q.y(), q.z()})}});
  }
  j = Json{{"timestamp", s.timestamp}, {"instances", std::move(instances)}};
}

void from_json(const Json& j, Scene& s) {
  s.timestamp = j.value("timestamp", 0.0);
  s.instances.clear();
  for (const auto& item : j.at("instances")) {
    ObjectInstance inst;
    inst.id = item.at("id").get<std::string>();
    inst.pose.position = vec3_from_json(item.at("position_m"));
    inst.pose.orientation = item.contains("orientation_wxyz") ? quat_from_json(item.at("orientation_wxyz"))
                                                              : Quat::Identity();
    s.instances.push_back(std::move(inst));
  }
}

void to_json(Json& j, const Aabb& b) {
  j = Json{{"min", vec_to_json(b.min)}, {"max", vec_to_json(b.max)}};
}

void from_json(const Json& j, Aabb& b) {
  b.min = vec3_from_json(j.at("min"));
  b.max = vec3_from_json(j.at("max"));
  if ((b.min.array() > b.max.array()).any()) throw Error(ErrorKind::InvalidArgument, "AABB min exceeds max");
}

void to_json(Json& j, const RelationCommand& c) {
  j = Json{{"relation", c.relation.id},
           {"relation_name", c.relation.display_name},
           {"target", c.target},
           {"references", c.references}};
}

void from_json(const Json& j, RelationCommand& c) {
  c.relation.id = j.at("relation").get<std::string>();
  c.relation.display_name = j.value("relation_name", c.relation.id);
  c.target = j.at("target").get<std::string>();
  c.references = j.at("references").get<std::vector<std::string>>();
}

void to_json(Json& j, const Demonstration& d) {
  j = Json{{"scene_before", d.scene_before}, {"command", d.command}, {"scene_after", d.scene_after}};
}

void from_json(const Json& j, Demonstration& d) {
  d.scene_before = j.at("scene_before").get<Scene>();
  d.command = j.at("command").get<RelationCommand>();
  d.scene_after = j.at("scene_after").get<Scene>();
}

void to_json(Json& j, const CylindricalDistribution& d) {
  j = Json{{"mu_rh", vec2_to_json(d.rh.mean)},
           {"sigma_rh", mat2_to_json(d.rh.covariance)},
           {"mu_phi", d.phi.mean_angle},
           {"kappa_phi", d.phi.concentration}};
}

void from_json(const Json& j, CylindricalDistribution& d) {
  d.rh.mean = vec2_from_json(j.at("mu_rh"));
  d.rh.covariance = mat2_from_json(j.at("sigma_rh"));
  d.phi.mean_angle = j.at("mu_phi").get<double>();
  d.phi.concentration = j.at("kappa_phi").get<double>();
}

void to_json(Json& j, const RelationModel& m) {
  j = Json{{"relation_id", m.relation.id},
           {"relation_name", m.relation.display_name},
           {"demo_count", m.demo_count},
           {"accumulators",
            {{"n", m.gaussian_acc.n},
             {"mean", vec2_to_json(m.gaussian_acc.mean)},
             {"mean_compensation", vec2_to_json(m.gaussian_acc.compensation)},
             {"m2", mat2_to_json(m.gaussian_acc.m2)},
             {"direction_sum", vec2_to_json(m.vonmises_acc.direction_sum)}}},
           {"theta", m.theta ? Json(*m.theta) : Json(nullptr)}};
}

void from_json(const Json& j, RelationModel& m) {
  m.relation.id = j.at("relation_id").get<std::string>();
  m.relation.display_name = j.value("relation_name", m.relation.id);
  m.demo_count = j.at("demo_count").get<std::size_t>();
  const Json& acc = j.at("accumulators");
  m.gaussian_acc.n = acc.at("n").get<std::size_t>();
  m.gaussian_acc.mean = vec2_from_json(acc.at("mean"));
  m.gaussian_acc.compensation =
      acc.contains("mean_compensation") ? vec2_from_json(acc.at("mean_compensation")) : Vec2::Zero();
  m.gaussian_acc.m2 = mat2_from_json(acc.at("m2"));
  m.vonmises_acc.n = m.gaussian_acc.n;
  m.vonmises_acc.direction_sum = vec2_from_json(acc.at("direction_sum"));
  const Json& theta = j.at("theta");
  if (theta.is_null()) {
    m.theta.reset();
  } else {
    m.theta = theta.get<CylindricalDistribution>();
  }
}

void to_json(Json& j, const Workspace& w) {
  j = Json{{"tables", w.tables}, {"bounds", w.bounds}};
}

void from_json(const Json& j, Workspace& w) {
  w.tables = j.at("tables").get<std::vector<Aabb>>();
  w.bounds = j.at("bounds").get<Aabb>();
}

ObjectCatalog catalog_from_json(const Json& j) {
  ObjectCatalog catalog;
  for (const auto& item : j) catalog.add(item.get<ObjectModel>());
  return catalog;
}

Json catalog_to_json(const ObjectCatalog& catalog) {
  Json out = Json::array();
  for (const auto& [_, model] : catalog.models()) out.push_back(model);
  return out;
}

GroundingCatalog grounding_from_json(const Json& j) {
  using Table = GroundingCatalog::NameTable;
  auto display = j.contains("display_names") ? j.at("display_names").get<std::map<std::string, std::string>>()
                                             : std::map<std::string, std::string>{};
  return {j.at("objects").get<Table>(), j.at("relations").get<Table>(), std::move(display)};
}

Json grounding_to_json(const GroundingCatalog& catalog) {
  return Json{{"objects", catalog.objects()},
              {"relations", catalog.relations()},
              {"display_names", catalog.display_names()}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::StorageFailure, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::StorageFailure, "cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::StorageFailure, "write to '" + path.string() + "' failed");
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::vector<Demonstration> read_demos_jsonl(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Demonstration> demos;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    demos.push_back(Json::parse(line).get<Demonstration>());
  }
  return demos;
}

void write_demos_jsonl(const std::filesystem::path& path, const std::vector<Demonstration>& demos) {
  std::string text;
  for (const auto& d : demos) text += Json(d).dump() + "\n";
  write_text_file(path, text);
}

}  // namespace relspace
