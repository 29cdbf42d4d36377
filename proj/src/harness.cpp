#include "relspace/harness.hpp"

#include "relspace/baselines.hpp"
#include "relspace/error.hpp"
#include "relspace/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace relspace {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(const std::vector<bool>& bits) {
  if (bits.empty()) return kNaN;
  const auto hits = std::count(bits.begin(), bits.end(), true);
  return static_cast<double>(hits) / static_cast<double>(bits.size());
}

std::uint64_t eval_seed(std::uint64_t master, std::size_t rep, std::size_t task, std::size_t interaction) {
  return derive_seed(master, {fnv1a("evaluate"), rep, task, interaction});
}

std::uint64_t interaction_seed(std::uint64_t master, std::size_t rep, std::size_t task, std::size_t interaction) {
  return derive_seed(master, {fnv1a("interact"), rep, task, interaction});
}

std::string format_ratio(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double parse_ratio(const std::string& s) {
  if (s == "NaN" || s == "nan" || s.empty()) return kNaN;
  return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

struct MeanStd {
  double mean = kNaN;
  double std = kNaN;
};

MeanStd mean_std(const std::vector<double>& values) {
  std::vector<double> v;
  std::copy_if(values.begin(), values.end(), std::back_inserter(v), [](double x) { return !std::isnan(x); });
  if (v.empty()) return {};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

Task task_from_demo(const Demonstration& demo) { return {demo.scene_before, demo.command}; }

void LearningScenario::validate() const {
  if (demonstrations.empty()) throw Error(ErrorKind::InvalidArgument, "scenario has no demonstrations");
  if (repetitions == 0) throw Error(ErrorKind::InvalidArgument, "scenario needs at least one repetition");
  for (const auto& d : demonstrations) {
    if (d.command.relation.id != relation.id) {
      throw Error(ErrorKind::InvalidArgument,
                  "demonstration of '" + d.command.relation.id + "' in scenario for '" + relation.id + "'");
    }
  }
}

std::string_view to_string(Mode mode) noexcept { return mode == Mode::Learned ? "learned" : "baseline"; }

Mode parse_mode(std::string_view text) {
  if (text == "learned") return Mode::Learned;
  if (text == "baseline") return Mode::Baseline;
  throw Error(ErrorKind::InvalidArgument, "mode must be 'learned' or 'baseline'");
}

InteractionRecord run_interaction(Memory& memory, const Environment& env, const Task& task,
                                  const Demonstration& demo, Mode mode, std::uint64_t plan_seed,
                                  double timestamp) {
  InteractionRecord record;
  PlanConfig config = env.config;
  config.seed = plan_seed;
  if (mode == Mode::Baseline) {
    record.status = baseline_plan(task.scene, env.catalog, task.command, env.workspace, config).status;
    return record;
  }

  memory.record_command(timestamp, task.command);
  const PlanResult result =
      plan(task.scene, env.catalog, task.command, memory.model(task.command.relation.id), env.workspace, config);
  record.status = result.status;
  if (result.status != PlanStatus::Success) {
    memory.learn(demo, env.catalog, UpdateMode::Incremental);
    record.demo_given = true;
  }
  return record;
}

std::vector<bool> evaluate_model(const RelationModel* model, const std::vector<Task>& tasks,
                                 const Environment& env, Mode mode, const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() != tasks.size()) throw Error(ErrorKind::InvalidArgument, "one seed per task required");
  std::vector<bool> success(tasks.size(), false);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    PlanConfig config = env.config;
    config.seed = seeds[i];
    const Task& t = tasks[i];
    const PlanResult r = mode == Mode::Baseline
                             ? baseline_plan(t.scene, env.catalog, t.command, env.workspace, config)
                             : plan(t.scene, env.catalog, t.command, model, env.workspace, config);
    success[i] = r.status == PlanStatus::Success;
  }
  return success;
}

std::vector<MetricsRow> run_learning_scenario(const LearningScenario& scenario, const Environment& env, Mode mode) {
  scenario.validate();
  const std::size_t n = scenario.demonstrations.size();
  std::vector<Task> tasks;
  tasks.reserve(n);
  for (const auto& d : scenario.demonstrations) tasks.push_back(task_from_demo(d));

  std::vector<MetricsRow> rows;
  rows.reserve(scenario.repetitions * (n + 1));
  for (std::size_t rep = 0; rep < scenario.repetitions; ++rep) {
    Memory memory(env.grounding, derive_seed(scenario.seed, {fnv1a("augment"), rep}));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(scenario.seed, {fnv1a("shuffle"), rep}));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    std::vector<bool> seen(n, false);
    std::size_t demos = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      if (k > 0) {
        const std::size_t t = order[k - 1];
        const auto record = run_interaction(memory, env, tasks[t], scenario.demonstrations[t], mode,
                                            interaction_seed(scenario.seed, rep, t, k), static_cast<double>(k));
        demos += record.demo_given ? 1 : 0;
        seen[t] = true;
      }
      std::vector<std::uint64_t> seeds(n);
      for (std::size_t t = 0; t < n; ++t) seeds[t] = eval_seed(scenario.seed, rep, t, k);
      const auto bits = evaluate_model(memory.model(scenario.relation.id), tasks, env, mode, seeds);

      std::vector<bool> seen_bits, unseen_bits;
      for (std::size_t t = 0; t < n; ++t) (seen[t] ? seen_bits : unseen_bits).push_back(bits[t]);
      rows.push_back({scenario.relation.id, rep, k, ratio(seen_bits), ratio(unseen_bits), ratio(bits), demos});
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricsRow>& rows) {
  std::map<std::size_t, std::vector<const MetricsRow*>> by_interaction;
  for (const auto& r : rows) by_interaction[r.interaction].push_back(&r);

  std::vector<AggregateRow> out;
  for (const auto& [k, group] : by_interaction) {
    std::vector<double> seen, unseen, all, demos;
    for (const auto* r : group) {
      seen.push_back(r->seen);
      unseen.push_back(r->unseen);
      all.push_back(r->all);
      demos.push_back(static_cast<double>(r->demos));
    }
    const auto s = mean_std(seen), u = mean_std(unseen), a = mean_std(all), d = mean_std(demos);
    out.push_back({k, s.mean, s.std, u.mean, u.std, a.mean, a.std, d.mean, d.std});
  }
  return out;
}

SuiteOptions load_suite_options(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  SuiteOptions o;
  try {
    o.relations = j.value("relations", o.relations);
    o.tasks = j.value("tasks", o.tasks);
    o.repetitions = j.value("repetitions", o.repetitions);
    o.clutter = j.value("clutter", o.clutter);
    o.seed = j.value("seed", o.seed);
    if (j.contains("demo_files")) {
      for (const auto& [id, file] : j.at("demo_files").items()) {
        std::filesystem::path p = file.get<std::string>();
        o.demo_files[id] = p.is_absolute() ? p : path.parent_path() / p;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "bad scenario file '" + path.string() + "': " + e.what());
  }
  return o;
}

std::vector<MetricsRow> run_suite(const SuiteOptions& options, const Environment& env, Mode mode) {
  std::vector<RelationSymbol> relations;
  if (options.relations.empty()) {
    relations = standard_relations();
  } else {
    for (const auto& id : options.relations) relations.push_back(env.grounding.relation(id));
  }
  const auto& truth = default_ground_truth();

  std::vector<MetricsRow> rows;
  for (const auto& relation : relations) {
    LearningScenario scenario;
    scenario.relation = relation;
    scenario.repetitions = options.repetitions;
    scenario.seed = derive_seed(options.seed, {fnv1a(relation.id)});
    if (auto it = options.demo_files.find(relation.id); it != options.demo_files.end()) {
      scenario.demonstrations = read_demos_jsonl(it->second);
    } else {
      auto gt = truth.find(relation.id);
      if (gt == truth.end()) throw Error(ErrorKind::InvalidArgument, "no ground truth for '" + relation.id + "'");
      GenerationOptions gen;
      gen.count = options.tasks;
      gen.clutter = options.clutter;
      gen.seed = options.seed;
      scenario.demonstrations = generate_synthetic_demos(relation, gt->second, env, gen);
    }
    auto part = run_learning_scenario(scenario, env, mode);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "relation,repetition,interaction,seen_ratio,unseen_ratio,all_ratio,demos_received\n";
  for (const auto& r : rows) {
    out += r.relation + "," + std::to_string(r.repetition) + "," + std::to_string(r.interaction) + "," +
           format_ratio(r.seen) + "," + format_ratio(r.unseen) + "," + format_ratio(r.all) + "," +
           std::to_string(r.demos) + "\n";
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "interaction,seen_mean,seen_std,unseen_mean,unseen_std,all_mean,all_std,demos_mean,demos_std\n";
  for (const auto& r : rows) {
    out += std::to_string(r.interaction);
    for (double v : {r.seen_mean, r.seen_std, r.unseen_mean, r.unseen_std, r.all_mean, r.all_std, r.demos_mean,
                     r.demos_std}) {
      out += "," + format_ratio(v);
    }
    out += "\n";
  }
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidArgument, "empty metrics file");
  if (split_csv_line(line).size() != 7) throw Error(ErrorKind::InvalidArgument, "unexpected metrics header");
  std::vector<MetricsRow> rows;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) {
      throw Error(ErrorKind::InvalidArgument, "metrics line " + std::to_string(lineno) + " has wrong arity");
    }
    try {
      rows.push_back({cells[0], std::stoul(cells[1]), std::stoul(cells[2]), parse_ratio(cells[3]),
                      parse_ratio(cells[4]), parse_ratio(cells[5]), std::stoul(cells[6])});
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "metrics line " + std::to_string(lineno) + " is not numeric");
    }
  }
  return rows;
}

std::string render_curves_svg(const std::vector<AggregateRow>& rows, const std::string& title) {
  constexpr double W = 640, H = 400, L = 60, R = 60, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  std::size_t max_k = 1;
  double max_demos = 1.0;
  for (const auto& r : rows) {
    max_k = std::max(max_k, r.interaction);
    if (!std::isnan(r.demos_mean)) max_demos = std::max(max_demos, std::ceil(r.demos_mean + r.demos_std));
  }
  auto x = [&](double k) { return L + pw * k / static_cast<double>(max_k); };
  auto y = [&](double v) { return T + ph * (1.0 - std::clamp(v, 0.0, 1.0)); };
  auto yd = [&](double d) { return T + ph * (1.0 - d / max_demos); };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    svg << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << y(v) << "\" y2=\"" << y(v)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << L - 6 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">" << i * 10 << "%</text>\n";
  }
  for (std::size_t k = 0; k <= max_k; ++k) {
    svg << "<text x=\"" << x(static_cast<double>(k)) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << k
        << "</text>\n";
  }
  for (int d = 0; d <= static_cast<int>(max_demos); ++d) {
    svg << "<text x=\"" << L + pw + 6 << "\" y=\"" << yd(d) + 4 << "\">" << d << "</text>\n";
  }
  svg << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">interaction</text>\n";
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  struct Series {
    const char* name;
    const char* color;
    double AggregateRow::*mean;
    double AggregateRow::*std;
    bool demos;
  };
  const Series series[] = {
      {"seen", "#1f77b4", &AggregateRow::seen_mean, &AggregateRow::seen_std, false},
      {"unseen", "#ff7f0e", &AggregateRow::unseen_mean, &AggregateRow::unseen_std, false},
      {"all", "#2ca02c", &AggregateRow::all_mean, &AggregateRow::all_std, false},
      {"demos", "#7f7f7f", &AggregateRow::demos_mean, &AggregateRow::demos_std, true},
  };
  int legend = 0;
  for (const auto& s : series) {
    auto py = [&](double v) { return s.demos ? yd(v) : y(v); };
    std::ostringstream upper, lower, line;
    upper.setf(std::ios::fixed);
    lower.setf(std::ios::fixed);
    line.setf(std::ios::fixed);
    upper.precision(2);
    lower.precision(2);
    line.precision(2);
    std::vector<const AggregateRow*> pts;
    for (const auto& r : rows) {
      if (!std::isnan(r.*s.mean)) pts.push_back(&r);
    }
    if (pts.empty()) continue;
    for (const auto* r : pts) {
      const double k = static_cast<double>(r->interaction);
      line << x(k) << "," << py(r->*s.mean) << " ";
      upper << x(k) << "," << py(r->*s.mean + r->*s.std) << " ";
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      lower << x(static_cast<double>((*it)->interaction)) << "," << py((*it)->*s.mean - (*it)->*s.std) << " ";
    }
    svg << "<polygon points=\"" << upper.str() << lower.str() << "\" fill=\"" << s.color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.demos ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    const double ly = T + 14 + 16 * legend++;
    svg << "<line x1=\"" << L + 10 << "\" x2=\"" << L + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\""
        << s.color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << L + 36 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace relspace
