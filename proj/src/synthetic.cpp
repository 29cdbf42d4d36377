#include "relspace/synthetic.hpp"

#include "relspace/error.hpp"

#include <algorithm>
#include <numbers>

namespace relspace {
namespace {

constexpr double kPi = std::numbers::pi;

CylindricalDistribution make_truth(double r, double sigma_r, double phi, double kappa, double h,
                                   double sigma_h) {
  CylindricalDistribution d;
  d.rh.mean = Vec2(r, h);
  d.rh.covariance = Mat2::Zero();
  d.rh.covariance(0, 0) = sigma_r * sigma_r;
  d.rh.covariance(1, 1) = sigma_h * sigma_h;
  d.phi = {phi, kappa};
  return d;
}

bool footprints_clear(const Aabb& a, const Aabb& b, double margin) {
  return a.max.x() + margin <= b.min.x() || b.max.x() + margin <= a.min.x() ||
         a.max.y() + margin <= b.min.y() || b.max.y() + margin <= a.min.y();
}

// Drops `ids` onto the table one by one; the first `ref_count` land in the
// central region. Returns false when an object finds no free spot.
bool layout_scene(const std::vector<std::string>& ids, std::size_t ref_count, const Environment& env,
                  Rng& rng, Scene& scene) {
  const Aabb& table = env.workspace.tables.front();
  std::uniform_real_distribution<double> yaw_dist(0.0, kPi);
  std::vector<Aabb> placed;
  scene.instances.clear();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const ObjectModel& model = env.catalog.at(ids[i]);
    const double reach = i < ref_count ? 0.3 : 1.0;
    const Vec2 lo = table.min.head<2>() * reach + Vec2::Constant(0.08);
    const Vec2 hi = table.max.head<2>() * reach - Vec2::Constant(0.08);
    std::uniform_real_distribution<double> xd(lo.x(), hi.x());
    std::uniform_real_distribution<double> yd(lo.y(), hi.y());
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      const double x = xd(rng);
      const double y = yd(rng);
      const double yaw = yaw_dist(rng);
      const Pose pose = Pose::from_yaw(Vec3(x, y, table.max.z() + 0.5 * model.extents.z()), yaw);
      const Aabb box = world_aabb(model, pose);
      if (!env.workspace.bounds.contains_xy(box)) continue;
      if (std::all_of(placed.begin(), placed.end(), [&](const Aabb& p) { return footprints_clear(box, p, 0.03); })) {
        placed.push_back(box);
        scene.instances.push_back({ids[i], pose});
        ok = true;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Environment default_environment() {
  Environment env;
  const std::vector<ObjectModel> objects = {
      {"cup", "cup", Vec3(0.08, 0.08, 0.10)},      {"mug", "mug", Vec3(0.09, 0.09, 0.09)},
      {"tea", "tea", Vec3(0.07, 0.05, 0.12)},      {"milk", "milk", Vec3(0.07, 0.07, 0.16)},
      {"juice", "juice", Vec3(0.06, 0.06, 0.14)},  {"bowl", "bowl", Vec3(0.14, 0.14, 0.07)},
      {"plate", "plate", Vec3(0.20, 0.20, 0.03)},  {"fork", "fork", Vec3(0.03, 0.18, 0.02)},
      {"spoon", "spoon", Vec3(0.04, 0.16, 0.02)},  {"sponge", "sponge", Vec3(0.09, 0.06, 0.04)},
      {"apple", "apple", Vec3(0.08, 0.08, 0.08)},  {"jar", "jar", Vec3(0.08, 0.08, 0.11)},
  };
  env.catalog = ObjectCatalog(objects);

  GroundingCatalog::NameTable object_names;
  for (const auto& o : objects) object_names[o.id] = {o.name};
  GroundingCatalog::NameTable relation_names = {
      {"right_of", {"to the right of", "right of", "on the right side of"}},
      {"left_of", {"to the left of", "left of", "on the left side of"}},
      {"behind", {"behind"}},
      {"in_front_of", {"in front of"}},
      {"on_top_of", {"on top of", "onto"}},
      {"close_to", {"close to", "near", "next to"}},
      {"far_from", {"far from", "far away from"}},
      {"between", {"between"}},
      {"among", {"among", "amongst"}},
      {"closer", {"closer to"}},
      {"farther_from", {"farther from", "farther away from"}},
      {"other_side_of", {"on the other side of", "to the other side of"}},
  };
  std::map<std::string, std::string> display;
  for (const auto& r : standard_relations()) display[r.id] = r.display_name;
  env.grounding = GroundingCatalog(std::move(object_names), std::move(relation_names), std::move(display));

  const Aabb table{Vec3(-0.7, -0.5, -0.75), Vec3(0.7, 0.5, 0.0)};
  env.workspace.tables = {table};
  env.workspace.bounds = {Vec3(-0.7, -0.5, -0.75), Vec3(0.7, 0.5, 2.0)};
  return env;
}

Scene default_scene() {
  const Environment env = default_environment();
  Scene scene;
  const std::vector<std::pair<std::string, Vec2>> layout = {
      {"plate", Vec2(0.0, 0.0)},     {"cup", Vec2(0.25, 0.1)},   {"tea", Vec2(-0.3, 0.2)},
      {"milk", Vec2(-0.45, -0.15)}, {"bowl", Vec2(0.4, -0.25)}, {"apple", Vec2(-0.1, -0.3)},
  };
  for (const auto& [id, xy] : layout) {
    const double z = 0.5 * env.catalog.at(id).extents.z();
    scene.instances.push_back({id, Pose::from_yaw(Vec3(xy.x(), xy.y(), z), 0.0)});
  }
  return scene;
}

const std::map<std::string, CylindricalDistribution>& default_ground_truth() {
  static const std::map<std::string, CylindricalDistribution> truth = {
      {"right_of", make_truth(3.0, 0.3, 0.0, 8.0, 0.5, 0.2)},
      {"left_of", make_truth(3.0, 0.3, kPi, 8.0, 0.5, 0.2)},
      {"behind", make_truth(3.0, 0.3, kPi / 2, 8.0, 0.5, 0.2)},
      {"in_front_of", make_truth(3.0, 0.3, -kPi / 2, 8.0, 0.5, 0.2)},
      {"on_top_of", make_truth(0.2, 0.12, 0.0, 0.5, 1.5, 0.25)},
      {"close_to", make_truth(2.6, 0.3, 0.0, 0.3, 0.5, 0.2)},
      {"far_from", make_truth(5.0, 0.8, 0.0, 0.3, 0.5, 0.2)},
      {"between", make_truth(0.15, 0.1, 0.0, 0.5, 0.5, 0.2)},
      {"among", make_truth(0.25, 0.15, 0.0, 0.3, 0.5, 0.2)},
      {"closer", make_truth(2.4, 0.3, 0.0, 0.3, 0.5, 0.2)},
      {"farther_from", make_truth(4.5, 0.8, 0.0, 0.3, 0.5, 0.2)},
      {"other_side_of", make_truth(3.0, 0.3, kPi, 1.0, 0.5, 0.2)},
  };
  return truth;
}

std::size_t reference_count(const std::string& relation_id) {
  if (relation_id == "between") return 2;
  if (relation_id == "among") return 3;
  return 1;
}

std::vector<Demonstration> generate_synthetic_demos(const RelationSymbol& relation,
                                                    const CylindricalDistribution& ground_truth,
                                                    const Environment& env,
                                                    const GenerationOptions& options) {
  if (options.count < 1) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
  const std::size_t refs = reference_count(relation.id);
  if (env.catalog.size() < 1 + refs + options.clutter) {
    throw Error(ErrorKind::InvalidArgument, "catalog too small for the requested clutter level");
  }

  std::vector<Demonstration> demos;
  demos.reserve(options.count);
  for (std::size_t index = 0; index < options.count; ++index) {
    Rng rng(derive_seed(options.seed, {fnv1a(relation.id), index}));
    std::size_t attempts = 0;
    bool done = false;
    while (!done) {
      auto ids = env.catalog.ids();
      std::shuffle(ids.begin(), ids.end(), rng);
      // Layout order: references, target, distractors.
      std::vector<std::string> chosen(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(1 + refs + options.clutter));
      std::rotate(chosen.begin(), chosen.begin() + 1, chosen.begin() + static_cast<std::ptrdiff_t>(1 + refs));
      const std::string target = chosen[refs];

      Demonstration demo;
      demo.scene_before.timestamp = 2.0 * static_cast<double>(index);
      if (!layout_scene(chosen, refs, env, rng, demo.scene_before)) {
        if (++attempts >= options.max_attempts) break;
        continue;
      }
      demo.command.relation = relation;
      demo.command.target = target;
      demo.command.references.assign(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(refs));

      const RelationFrame frame = build_relation_frame(demo.scene_before, env.catalog, demo.command.references);
      for (int draw = 0; draw < 20 && attempts < options.max_attempts; ++draw, ++attempts) {
        const Vec3 proposal = from_cylindrical(frame, sample(ground_truth, rng));
        const Verdict verdict =
            check_feasible(demo.scene_before, env.catalog, target, proposal, env.workspace, env.config);
        if (!verdict.feasible) continue;
        demo.scene_after = demo.scene_before;
        demo.scene_after.timestamp = demo.scene_before.timestamp + 1.0;
        Pose moved = demo.scene_before.pose(target);
        moved.position = verdict.placement;
        demo.scene_after.set_pose(target, moved);
        demos.push_back(std::move(demo));
        done = true;
        break;
      }
      if (!done && attempts >= options.max_attempts) break;
    }
    if (!done) {
      throw Error(ErrorKind::InfeasibleGeneration,
                  "no feasible placement for '" + relation.id + "' after " + std::to_string(attempts) + " attempts");
    }
  }
  return demos;
}

}  // namespace relspace
