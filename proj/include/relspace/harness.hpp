#pragma once

#include "relspace/memory.hpp"
#include "relspace/planner.hpp"
#include "relspace/relation_models.hpp"
#include "relspace/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relspace {

/// A scene plus the command to carry out in it.
struct Task {
  Scene scene;
  RelationCommand command;
};

Task task_from_demo(const Demonstration& demo);

struct LearningScenario {
  RelationSymbol relation;
  std::vector<Demonstration> demonstrations;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when empty or when a demo has another relation.
  void validate() const;
};

enum class Mode { Learned, Baseline };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

struct InteractionRecord {
  std::size_t interaction = 0;
  PlanStatus status = PlanStatus::NoModel;
  bool demo_given = false;
  std::vector<bool> seen_success;
  std::vector<bool> unseen_success;
};

/// One evaluation row. Ratios are NaN when the respective task set is empty.
struct MetricsRow {
  std::string relation;
  std::size_t repetition = 0;
  std::size_t interaction = 0;
  double seen = 0.0;
  double unseen = 0.0;
  double all = 0.0;
  std::size_t demos = 0;
};

struct AggregateRow {
  std::size_t interaction = 0;
  double seen_mean = 0.0, seen_std = 0.0;
  double unseen_mean = 0.0, unseen_std = 0.0;
  double all_mean = 0.0, all_std = 0.0;
  double demos_mean = 0.0, demos_std = 0.0;
};

/// One command -> plan -> (execute | query, demonstrate, update) cycle.
/// The plan uses `plan_seed`; `demo` is only consumed when planning fails.
/// Baseline mode never touches memory.
InteractionRecord run_interaction(Memory& memory, const Environment& env, const Task& task,
                                  const Demonstration& demo, Mode mode, std::uint64_t plan_seed,
                                  double timestamp);

/// Side-effect free success bits, one per task. Task i is planned with
/// `seeds[i]`. A null model fails everywhere in learned mode.
std::vector<bool> evaluate_model(const RelationModel* model, const std::vector<Task>& tasks,
                                 const Environment& env, Mode mode, const std::vector<std::uint64_t>& seeds);

/// Rows for interaction 0..N of every repetition.
std::vector<MetricsRow> run_learning_scenario(const LearningScenario& scenario, const Environment& env,
                                              Mode mode);

/// Population mean/std per interaction index; NaN cells are skipped.
std::vector<AggregateRow> aggregate(const std::vector<MetricsRow>& rows);

struct SuiteOptions {
  std::vector<std::string> relations;  // empty selects all twelve
  std::size_t tasks = 10;
  std::size_t repetitions = 10;
  std::size_t clutter = 3;
  std::uint64_t seed = 0;
  /// Relation id -> JSONL demonstration file; replaces the generator for that relation.
  std::map<std::string, std::filesystem::path> demo_files;
};

/// Reads a scenario description:
///   {"relations": [...], "tasks": 10, "repetitions": 10, "clutter": 3,
///    "seed": 7, "demo_files": {"right_of": "right.jsonl"}}
/// All keys are optional; relative demo paths resolve against the file.
SuiteOptions load_suite_options(const std::filesystem::path& path);

std::vector<MetricsRow> run_suite(const SuiteOptions& options, const Environment& env, Mode mode);

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

/// Success-ratio curves (mean with a +-std band) and demos received.
std::string render_curves_svg(const std::vector<AggregateRow>& rows, const std::string& title);

}  // namespace relspace
