#pragma once

#include "relspace/error.hpp"
#include "relspace/memory.hpp"
#include "relspace/planner.hpp"
#include "relspace/serialization.hpp"
#include "relspace/synthetic.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace relspace {

/// HTTP-agnostic reply: a status code and a JSON body.
struct Reply {
  int status = 200;
  Json body;
};

/// One live teaching session. Every public call takes the session lock, so
/// concurrent callers observe whole events only.
class Session {
 public:
  Session(Environment env, Scene initial_scene, std::uint64_t augmentation_seed = kDefaultAugmentationSeed,
          std::uint64_t plan_seed = 0);

  /// Grounds and plans. Executes on success, otherwise asks for a demonstration.
  Reply command(const std::string& text);
  /// Sets one object's pose: {"id", "position_m", "orientation_wxyz"?}.
  Reply move(const Json& request);
  /// Turns the scene at the last command plus the current scene into a demonstration.
  Reply cue();
  Reply heatmap(const std::string& relation_id, std::size_t width, std::size_t height) const;
  Reply state() const;
  Reply reset();

  /// Writes the memory through to `dir` from now on.
  void bind_memory(const std::filesystem::path& dir);

  [[nodiscard]] Memory memory_copy() const;
  [[nodiscard]] Scene scene_copy() const;

 private:
  struct Context {
    RelationCommand command;
    Scene scene_at_command;
    bool pending = false;
  };

  double tick();
  void say(const std::string& speaker, const std::string& text);
  static Reply error_reply(int status, const Error& e);

  mutable std::mutex mutex_;
  Environment env_;
  Scene initial_scene_;
  Scene scene_;
  Memory memory_;
  std::uint64_t augmentation_seed_;
  std::uint64_t plan_seed_;
  std::optional<Context> context_;
  std::vector<Json> log_;
  double clock_ = 0.0;
  std::optional<std::filesystem::path> memory_dir_;
};

}  // namespace relspace
