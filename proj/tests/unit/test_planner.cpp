#include "fixtures.hpp"

#include "relspace/error.hpp"
#include "relspace/planner.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace relspace;
using namespace fixtures;

namespace {

RelationModel one_demo_model(const Demonstration& d) {
  RelationModel m;
  m.relation = d.command.relation;
  return update_incremental(m, d, small_catalog());
}

}  // namespace

TEST_CASE("candidate on the empty table is feasible and snapped") {
  const auto catalog = small_catalog();
  const Scene s = scene_with({{"obj", Vec3(0.6, 0.6, 0.03)}});
  const Verdict v = check_feasible(s, catalog, "obj", Vec3(0, 0, 0.04), table_workspace(), PlanConfig{});
  CHECK(v.feasible);
  CHECK(v.reason == RejectReason::None);
  CHECK(v.placement.z() == doctest::Approx(0.03));
}

TEST_CASE("candidate overlapping an obstacle by 1 cm collides") {
  const auto catalog = small_catalog();
  // box half width 0.1, obj half width 0.03: touching at x = 0.13, overlap 0.01 at x = 0.12.
  const Scene s = scene_with({{"box", Vec3(0, 0, 0.05)}, {"obj", Vec3(0.6, 0.6, 0.03)}});
  const Verdict v = check_feasible(s, catalog, "obj", Vec3(0.12, 0, 0.03), table_workspace(), PlanConfig{});
  CHECK_FALSE(v.feasible);
  CHECK(v.reason == RejectReason::Collision);
  CHECK(v.blocking_object == "box");
}

TEST_CASE("margin decides between touching and free") {
  const auto catalog = small_catalog();
  const Scene s = scene_with({{"box", Vec3(0, 0, 0.05)}, {"obj", Vec3(0.6, 0.6, 0.03)}});
  PlanConfig no_margin;
  no_margin.collision_margin = 0.0;
  no_margin.rotation_checks = 1;
  CHECK(check_feasible(s, catalog, "obj", Vec3(0.131, 0, 0.03), table_workspace(), no_margin).feasible);
  // With the margin and all rotations the probe needs half diagonal 0.055 * sqrt(2) of clearance.
  CHECK_FALSE(check_feasible(s, catalog, "obj", Vec3(0.17, 0, 0.03), table_workspace(), PlanConfig{}).feasible);
  CHECK(check_feasible(s, catalog, "obj", Vec3(0.1 + 0.055 * std::sqrt(2.0) + 1e-3, 0, 0.03), table_workspace(),
                       PlanConfig{})
            .feasible);
}

TEST_CASE("candidate beyond the table edge is out of bounds") {
  const auto catalog = small_catalog();
  const Scene s = scene_with({{"obj", Vec3(0.6, 0.6, 0.03)}});
  const Verdict v = check_feasible(s, catalog, "obj", Vec3(1.5, 0, 0.03), table_workspace(), PlanConfig{});
  CHECK(v.reason == RejectReason::OutOfBounds);
}

TEST_CASE("floating and sunk candidates are unsupported") {
  const auto catalog = small_catalog();
  const Scene s = scene_with({{"obj", Vec3(0.6, 0.6, 0.03)}});
  CHECK(check_feasible(s, catalog, "obj", Vec3(0, 0, 0.3), table_workspace(), PlanConfig{}).reason ==
        RejectReason::Unsupported);
  CHECK(check_feasible(s, catalog, "obj", Vec3(0, 0, -0.1), table_workspace(), PlanConfig{}).reason ==
        RejectReason::Unsupported);
}

TEST_CASE("objects can rest on top of other objects") {
  const auto catalog = small_catalog();
  const Scene s = scene_with({{"box", Vec3(0, 0, 0.05)}, {"obj", Vec3(0.6, 0.6, 0.03)}});
  const Verdict v = check_feasible(s, catalog, "obj", Vec3(0, 0, 0.14), table_workspace(), PlanConfig{});
  CHECK(v.feasible);
  CHECK(v.placement.z() == doctest::Approx(0.13));
}

TEST_CASE("collision verdict is invariant under quarter turns of a square target") {
  const auto catalog = small_catalog();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int i = 0; i < 300; ++i) {
    Scene s = scene_with({{"box", Vec3(0, 0, 0.05)}, {"ref", Vec3(u(rng), u(rng), 0.05)}});
    const double yaw = u(rng) * 4;
    s.instances.push_back({"obj", Pose::from_yaw(Vec3(0.9, 0.9, 0.03), yaw)});
    Scene turned = s;
    turned.set_pose("obj", Pose::from_yaw(Vec3(0.9, 0.9, 0.03), yaw + std::numbers::pi / 2));
    const Vec3 cand(u(rng), u(rng), 0.03);
    CHECK(check_feasible(s, catalog, "obj", cand, table_workspace(), PlanConfig{}).feasible ==
          check_feasible(turned, catalog, "obj", cand, table_workspace(), PlanConfig{}).feasible);
  }
}

TEST_CASE("adding an obstacle never rescues a rejected candidate") {
  const auto catalog = small_catalog();
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::uniform_real_distribution<double> z(-0.05, 0.3);
  int flips = 0;
  for (int i = 0; i < 3000; ++i) {
    const Scene s = scene_with({{"ref", Vec3(u(rng), u(rng), 0.05)}, {"obj", Vec3(0.9, 0.9, 0.03)}});
    Scene more = s;
    more.instances.push_back({"box", Pose::from_yaw(Vec3(u(rng), u(rng), 0.05), u(rng))});
    const Vec3 cand(u(rng) * 1.7, u(rng), z(rng));
    const Verdict before = check_feasible(s, catalog, "obj", cand, table_workspace(), PlanConfig{});
    const Verdict after = check_feasible(more, catalog, "obj", cand, table_workspace(), PlanConfig{});
    if (before.reason == RejectReason::Collision || before.reason == RejectReason::OutOfBounds) {
      CHECK_FALSE(after.feasible);
    }
    if (!before.feasible && after.feasible) {
      // Only a new support surface can do this: the box top now carries the candidate.
      CHECK(before.reason == RejectReason::Unsupported);
      CHECK(after.placement.z() == doctest::Approx(0.1 + 0.03));
      ++flips;
    }
    if (before.feasible && after.feasible) CHECK(after.placement.z() >= before.placement.z());
  }
  MESSAGE("unsupported candidates carried by the new box: " << flips);
}

TEST_CASE("plan without a model asks for help") {
  const auto catalog = small_catalog();
  const Demonstration d = demo_at("right_of", {2, 0, 0});
  const PlanResult r = plan(d.scene_before, catalog, d.command, nullptr, table_workspace(), PlanConfig{});
  CHECK(r.status == PlanStatus::NoModel);
  CHECK_FALSE(r.chosen);
}

TEST_CASE("plan with missing objects throws UnknownObject") {
  const auto catalog = small_catalog();
  Demonstration d = demo_at("right_of", {2, 0, 0});
  d.command.references = {"ref2"};
  try {
    (void)plan(d.scene_before, catalog, d.command, nullptr, table_workspace(), PlanConfig{});
    FAIL("expected UnknownObject");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownObject);
  }
}

TEST_CASE("single demo model reproduces the demonstration") {
  const auto catalog = small_catalog();
  const Demonstration d = demo_to("right_of", Vec3(0.25, 0.05, 0.03));
  const RelationModel m = one_demo_model(d);
  PlanConfig cfg;
  cfg.seed = 4;
  const PlanResult r = plan(d.scene_before, catalog, d.command, &m, table_workspace(), cfg);
  REQUIRE(r.status == PlanStatus::Success);
  CHECK((*r.chosen - Vec3(0.25, 0.05, 0.03)).norm() < 0.03);
  CHECK(r.candidates.size() == 50);
}

TEST_CASE("single demo model is stuck when its spot is taken") {
  const auto catalog = small_catalog();
  const Demonstration d = demo_to("right_of", Vec3(0.3, 0.0, 0.03));
  const RelationModel m = one_demo_model(d);
  Scene blocked = d.scene_before;
  blocked.instances.push_back({"box", Pose::from_yaw(Vec3(0.3, 0.0, 0.05), 0.0)});
  const PlanResult r = plan(blocked, catalog, d.command, &m, table_workspace(), PlanConfig{});
  CHECK(r.status == PlanStatus::NoFeasibleCandidate);
  for (const auto& c : r.candidates) CHECK(c.verdict.reason == RejectReason::Collision);
}

TEST_CASE("plan is deterministic and picks the densest feasible candidate") {
  const auto catalog = small_catalog();
  RelationModel m;
  m.relation = {"close_to", "close_to"};
  for (const CylCoords c : {CylCoords{2, 0, 0.3}, CylCoords{3, 1, 0.3}, CylCoords{2.5, -1, 0.3}, CylCoords{4, 2, 0.3}}) {
    m = update_incremental(m, c);
  }
  const Demonstration d = demo_to("close_to", Vec3::Zero());
  Scene s = d.scene_before;
  s.instances.push_back({"box", Pose::from_yaw(Vec3(0.25, 0.1, 0.05), 0.3)});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PlanConfig cfg;
    cfg.seed = seed;
    const PlanResult a = plan(s, catalog, d.command, &m, table_workspace(), cfg);
    const PlanResult b = plan(s, catalog, d.command, &m, table_workspace(), cfg);
    REQUIRE(a.candidates.size() == b.candidates.size());
    CHECK(a.status == b.status);
    CHECK(a.chosen_index == b.chosen_index);
    for (std::size_t i = 0; i < a.candidates.size(); ++i) CHECK(a.candidates[i].position == b.candidates[i].position);
    if (a.status != PlanStatus::Success) continue;
    const auto& chosen = a.candidates[*a.chosen_index];
    for (std::size_t i = 0; i < a.candidates.size(); ++i) {
      const auto& c = a.candidates[i];
      if (!c.verdict.feasible) continue;
      CHECK(chosen.density >= c.density);
      if (c.density == chosen.density) CHECK(*a.chosen_index <= i);
    }
    const Verdict again = check_feasible(s, catalog, "obj", *a.chosen, table_workspace(), cfg);
    CHECK(again.feasible);
    CHECK((again.placement - *a.chosen).norm() < 1e-12);
  }
}

TEST_CASE("metric ranking divides out the cylindrical Jacobian") {
  const auto catalog = small_catalog();
  RelationModel m;
  m.relation = {"close_to", "close_to"};
  for (const CylCoords c : {CylCoords{2, 0, 0.3}, CylCoords{3, 1, 0.3}, CylCoords{2.5, -1, 0.3}}) {
    m = update_incremental(m, c);
  }
  const Demonstration d = demo_to("close_to", Vec3::Zero());
  PlanConfig normal, metric;
  metric.rank_in_metric_space = true;
  const PlanResult a = plan(d.scene_before, catalog, d.command, &m, table_workspace(), normal);
  const PlanResult b = plan(d.scene_before, catalog, d.command, &m, table_workspace(), metric);
  const double hs = 0.5 * std::hypot(0.1, 0.1), vs = 0.1;
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    if (!a.candidates[i].verdict.feasible) continue;
    const RelationFrame f{Vec3::Zero(), hs, vs};
    const double r = to_cylindrical(f, a.candidates[i].verdict.placement).r;
    CHECK(b.candidates[i].log_density ==
          doctest::Approx(a.candidates[i].log_density - std::log(hs * hs * vs * r)).epsilon(1e-12));
  }
}

TEST_CASE("config and workspace validation") {
  PlanConfig c;
  c.candidate_count = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = PlanConfig{};
  c.rotation_checks = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = PlanConfig{};
  c.collision_margin = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  Workspace w = table_workspace();
  w.tables.push_back(Aabb{Vec3(0.5, 0.5, -0.1), Vec3(1.5, 1.5, 0)});
  CHECK_THROWS_AS(w.validate(), Error);
}
