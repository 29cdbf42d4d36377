#include "relspace/error.hpp"
#include "relspace/harness.hpp"
#include "relspace/serialization.hpp"
#include "relspace/service.hpp"
#include "relspace/synthetic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace {

using namespace relspace;

std::filesystem::path summary_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_filename(out.stem().string() + "_summary.csv");
  return p;
}

int cmd_run(const std::string& scenario, const std::string& mode_text, const std::string& out,
            std::optional<std::uint64_t> seed) {
  SuiteOptions options = scenario.empty() ? SuiteOptions{} : load_suite_options(scenario);
  if (seed) options.seed = *seed;
  const Mode mode = parse_mode(mode_text);
  const Environment env = default_environment();

  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_suite(options, env, mode);
  const auto agg = aggregate(rows);
  write_text_file(out, metrics_csv(rows));
  write_text_file(summary_path(out), aggregate_csv(agg));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "mode " << to_string(mode) << ", " << rows.size() << " rows in " << secs << " s\n";
  std::cout << "interaction  seen          unseen        all           demos\n";
  for (const auto& r : agg) {
    std::printf("%11zu  %5.3f+-%5.3f  %5.3f+-%5.3f  %5.3f+-%5.3f  %4.2f+-%4.2f\n", r.interaction, r.seen_mean,
                r.seen_std, r.unseen_mean, r.unseen_std, r.all_mean, r.all_std, r.demos_mean, r.demos_std);
  }
  return 0;
}

int cmd_gen(const std::string& relation_id, std::size_t count, std::size_t clutter, const std::string& out,
            std::uint64_t seed) {
  const Environment env = default_environment();
  const auto& truth = default_ground_truth();
  auto gt = truth.find(relation_id);
  if (gt == truth.end()) throw Error(ErrorKind::InvalidArgument, "unknown relation '" + relation_id + "'");
  GenerationOptions gen;
  gen.count = count;
  gen.clutter = clutter;
  gen.seed = seed;
  const auto demos = generate_synthetic_demos(env.grounding.relation(relation_id), gt->second, env, gen);
  write_demos_jsonl(out, demos);
  std::cout << "wrote " << demos.size() << " synthetic demonstrations to " << out << "\n";
  return 0;
}

int cmd_plot(const std::string& in, const std::string& out) {
  const auto rows = parse_metrics_csv(read_text_file(in));
  write_text_file(out, render_curves_svg(aggregate(rows), "Success ratio per interaction"));
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive spatial relation learning: simulation harness and teaching service"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run learning scenarios and write metrics CSV");
  std::string scenario, mode = "learned", run_out = "metrics.csv";
  std::optional<std::uint64_t> run_seed;
  run->add_option("--scenario", scenario, "Scenario JSON (defaults: 12 relations, 10 tasks, 10 repetitions, clutter 3)");
  run->add_option("--mode", mode, "learned | baseline")->check(CLI::IsMember({"learned", "baseline"}));
  run->add_option("--out", run_out, "Metrics CSV path");
  run->add_option("--seed", run_seed, "Master seed (overrides the scenario file)");

  auto* gen = app.add_subcommand("gen-demos", "Generate synthetic demonstrations (JSONL)");
  std::string relation, gen_out = "demos.jsonl";
  std::size_t count = 10, clutter = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--relation", relation, "Relation id, e.g. right_of")->required();
  gen->add_option("--count", count, "Number of demonstrations")->check(CLI::PositiveNumber);
  gen->add_option("--clutter", clutter, "Distractor objects per scene");
  gen->add_option("--out", gen_out, "Output JSONL path");
  gen->add_option("--seed", gen_seed, "Seed");

  auto* plot = app.add_subcommand("plot", "Render success-ratio curves from a metrics CSV");
  std::string plot_in, plot_out = "curves.svg";
  plot->add_option("--in", plot_in, "Metrics CSV")->required();
  plot->add_option("--out", plot_out, "SVG output path");

  auto* serve = app.add_subcommand("serve", "Run the HTTP teaching service");
  ServiceOptions service;
  serve->add_option("--addr", service.address, "Listen address");
  serve->add_option("--port", service.port, "Listen port");
  serve->add_option("--catalog", service.catalog_file, "Object catalog JSON");
  serve->add_option("--workspace", service.workspace_file, "Workspace JSON");
  serve->add_option("--scene", service.scene_file, "Initial scene JSON");
  serve->add_option("--grounding", service.grounding_file, "Surface strings JSON");
  serve->add_option("--memory", service.memory_dir, "Directory the memory is persisted to");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, mode, run_out, run_seed);
    if (*gen) return cmd_gen(relation, count, clutter, gen_out, gen_seed);
    if (*plot) return cmd_plot(plot_in, plot_out);
    if (*serve) return run_service(service);
  } catch (const relspace::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
