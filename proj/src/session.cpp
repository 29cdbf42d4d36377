#include "relspace/session.hpp"

#include "relspace/error.hpp"
#include "relspace/grounding.hpp"

#include <algorithm>

namespace relspace {
namespace {

Json plan_json(const PlanResult& r) {
  Json j{{"status", std::string(to_string(r.status))}, {"candidates", r.candidates.size()}};
  const auto feasible = std::count_if(r.candidates.begin(), r.candidates.end(),
                                      [](const Candidate& c) { return c.verdict.feasible; });
  j["feasible"] = feasible;
  if (r.chosen) j["position_m"] = vec_to_json(*r.chosen);
  if (r.chosen_index) j["chosen_index"] = *r.chosen_index;
  return j;
}

}  // namespace

Session::Session(Environment env, Scene initial_scene, std::uint64_t augmentation_seed, std::uint64_t plan_seed)
    : env_(std::move(env)),
      initial_scene_(std::move(initial_scene)),
      scene_(initial_scene_),
      memory_(env_.grounding, augmentation_seed),
      augmentation_seed_(augmentation_seed),
      plan_seed_(plan_seed) {
  env_.workspace.validate();
  env_.config.validate();
  initial_scene_.validate(env_.catalog);
}

double Session::tick() {
  clock_ += 1.0;
  scene_.timestamp = clock_;
  return clock_;
}

void Session::say(const std::string& speaker, const std::string& text) {
  log_.push_back({{"time", clock_}, {"speaker", speaker}, {"text", text}});
}

Reply Session::error_reply(int status, const Error& e) {
  return {status, Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}};
}

Reply Session::command(const std::string& text) {
  std::lock_guard lock(mutex_);
  RelationCommand cmd;
  try {
    cmd = ground(text, env_.grounding, scene_);
  } catch (const Error& e) {
    return error_reply(400, e);
  }
  const double now = tick();
  say("human", text);
  memory_.record_command(now, cmd);

  PlanConfig config = env_.config;
  config.seed = derive_seed(plan_seed_, {static_cast<std::uint64_t>(now)});
  const RelationModel* model = memory_.model(cmd.relation.id);
  PlanResult result;
  try {
    result = plan(scene_, env_.catalog, cmd, model, env_.workspace, config);
  } catch (const Error& e) {
    return error_reply(400, e);
  }

  Context ctx{cmd, scene_, false};
  Json body{{"command", cmd}, {"plan", plan_json(result)}};
  if (result.status == PlanStatus::Success) {
    Pose pose = scene_.pose(cmd.target);
    pose.position = *result.chosen;
    scene_.set_pose(cmd.target, pose);
    body["status"] = "executed";
    body["utterance"] = "";
  } else {
    ctx.pending = true;
    const QueryKind kind = model == nullptr || !model->theta ? QueryKind::NoModel : QueryKind::InsufficientModel;
    const std::string utterance = verbalize_query(kind, cmd.relation);
    say("robot", utterance);
    body["status"] = "query";
    body["utterance"] = utterance;
  }
  context_ = std::move(ctx);
  return {200, std::move(body)};
}

Reply Session::move(const Json& request) {
  std::lock_guard lock(mutex_);
  std::string id;
  Pose pose;
  try {
    id = request.at("id").get<std::string>();
    // Reuse the scene parser so poses obey the same normalization rules.
    Json wrapped{{"instances", Json::array({{{"id", id}, {"position_m", request.at("position_m")}}})}};
    if (request.contains("orientation_wxyz")) wrapped["instances"][0]["orientation_wxyz"] = request.at("orientation_wxyz");
    pose = wrapped.get<Scene>().instances.front().pose;
    if (!request.contains("orientation_wxyz") && scene_.contains(id)) pose.orientation = scene_.pose(id).orientation;
  } catch (const Json::exception& e) {
    return error_reply(400, Error(ErrorKind::InvalidArgument, e.what()));
  } catch (const Error& e) {
    return error_reply(400, e);
  }
  if (!scene_.contains(id)) {
    return error_reply(404, Error(ErrorKind::UnknownObject, "object '" + id + "' is not in the scene"));
  }
  scene_.set_pose(id, pose);
  tick();
  return {200, Json::object()};
}

Reply Session::cue() {
  std::lock_guard lock(mutex_);
  if (!context_) {
    return error_reply(409, Error(ErrorKind::NoCommandContext, "no command to attach a demonstration to"));
  }
  const double now = tick();
  Demonstration demo{context_->scene_at_command, context_->command, scene_};
  demo.scene_after.timestamp = now;
  try {
    memory_.learn(demo, env_.catalog, UpdateMode::Incremental);
  } catch (const Error& e) {
    return error_reply(400, e);
  }
  const std::string utterance = verbalize_query(QueryKind::Thanks, context_->command.relation);
  say("human", "<cue>");
  say("robot", utterance);
  const std::string relation_id = context_->command.relation.id;
  context_.reset();
  return {200, Json{{"utterance", utterance}, {"demo_count", memory_.demo_count(relation_id)}}};
}

Reply Session::heatmap(const std::string& relation_id, std::size_t width, std::size_t height) const {
  std::lock_guard lock(mutex_);
  const RelationModel* model = memory_.model(relation_id);
  if (model == nullptr || !model->theta) {
    return error_reply(404, Error(ErrorKind::NoModel, "no model for '" + relation_id + "'"));
  }
  const auto& records = memory_.commands().records();
  auto it = std::find_if(records.rbegin(), records.rend(), [&](const CommandRecord& r) {
    return r.command.relation.id == relation_id &&
           std::all_of(r.command.references.begin(), r.command.references.end(),
                       [&](const std::string& ref) { return scene_.contains(ref); });
  });
  if (it == records.rend()) {
    return error_reply(404, Error(ErrorKind::NoCommandContext, "no command with references in the scene"));
  }
  if (width == 0 || height == 0 || width * height > 1'000'000) {
    return error_reply(400, Error(ErrorKind::InvalidArgument, "grid must be between 1x1 and 1e6 cells"));
  }

  const CylindricalDistribution& theta = *model->theta;
  const RelationFrame frame = build_relation_frame(scene_, env_.catalog, it->command.references);
  const double z = frame.origin.z() + theta.rh.mean.y() * frame.vertical_scale;
  const Aabb& b = env_.workspace.bounds;
  const double dx = (b.max.x() - b.min.x()) / static_cast<double>(width);
  const double dy = (b.max.y() - b.min.y()) / static_cast<double>(height);

  std::vector<double> values;
  values.reserve(width * height);
  for (std::size_t j = 0; j < height; ++j) {
    const double y = b.min.y() + (static_cast<double>(j) + 0.5) * dy;
    for (std::size_t i = 0; i < width; ++i) {
      const double x = b.min.x() + (static_cast<double>(i) + 0.5) * dx;
      values.push_back(pdf(theta, to_cylindrical(frame, Vec3(x, y, z))));
    }
  }
  return {200, Json{{"relation", relation_id},
                    {"grid", {width, height}},
                    {"bounds", {{"min", {b.min.x(), b.min.y()}}, {"max", {b.max.x(), b.max.y()}}}},
                    {"height_m", z},
                    {"references", it->command.references},
                    {"values", std::move(values)}}};
}

Reply Session::state() const {
  std::lock_guard lock(mutex_);
  Json counts = Json::object();
  for (const auto& [id, entity] : memory_.relations().entities()) counts[id] = memory_.demo_count(id);
  Json body{{"scene", scene_},
            {"log", log_},
            {"demo_counts", std::move(counts)},
            {"pending", context_ && context_->pending},
            {"has_command_context", context_.has_value()},
            {"workspace", env_.workspace},
            {"catalog", catalog_to_json(env_.catalog)}};
  body["command"] = context_ ? Json(context_->command) : Json(nullptr);
  return {200, std::move(body)};
}

Reply Session::reset() {
  std::lock_guard lock(mutex_);
  scene_ = initial_scene_;
  memory_ = Memory(env_.grounding, augmentation_seed_);
  if (memory_dir_) memory_.bind(*memory_dir_);
  context_.reset();
  log_.clear();
  clock_ = 0.0;
  return {200, Json::object()};
}

void Session::bind_memory(const std::filesystem::path& dir) {
  std::lock_guard lock(mutex_);
  if (std::filesystem::exists(dir / "manifest.json")) memory_ = Memory::restore(dir);
  memory_.bind(dir);
  memory_dir_ = dir;
}

Memory Session::memory_copy() const {
  std::lock_guard lock(mutex_);
  return memory_;
}

Scene Session::scene_copy() const {
  std::lock_guard lock(mutex_);
  return scene_;
}

}  // namespace relspace
