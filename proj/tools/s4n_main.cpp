#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "s4n/diagnostics.hpp"
#include "s4n/experiment.hpp"

using namespace s4n;

namespace {

struct DataOverrides {
  std::optional<Index> max_points;
  std::optional<Index> max_features;
  std::optional<std::string> scaling;
  std::optional<std::string> output;
  std::optional<std::string> seeds;
};

void add_overrides(CLI::App* cmd, DataOverrides& o) {
  cmd->add_option("--max-points", o.max_points, "Keep only the first N data points");
  cmd->add_option("--max-features", o.max_features, "Drop features with index >= n");
  cmd->add_option("--scaling", o.scaling, "none, global or per-feature")
      ->check(CLI::IsMember({"none", "global", "per-feature"}));
  cmd->add_option("--output", o.output, "Output directory for traces and summaries");
  cmd->add_option("--seeds", o.seeds, "Seed list such as 1-5 or 1,3,9");
}

void apply(const DataOverrides& o, ExperimentConfig& c) {
  if (o.max_points) c.data.load.max_points = *o.max_points;
  if (o.max_features) c.data.load.max_features = *o.max_features;
  if (o.scaling) {
    if (*o.scaling == "none") {
      c.data.scaling.reset();
    } else {
      c.data.scaling = *o.scaling == "global" ? ScalingMode::Global : ScalingMode::PerFeature;
    }
  }
  if (o.output) c.output_dir = *o.output;
  if (o.seeds) c.seeds = parse_seed_list(*o.seeds);
}

void print_table(const ExperimentSummary& s) {
  std::printf("%-12s %10s %12s %12s %9s\n", "method", "tol", "epochs", "wall_ms", "reached");
  for (const auto& r : s.table.rows) {
    const std::string ep = r.epochs ? std::to_string(*r.epochs) : "unreached";
    const std::string wm = r.wall_ms ? std::to_string(*r.wall_ms) : "unreached";
    std::printf("%-12s %10.0e %12s %12s %5lld/%lld\n", r.method.c_str(), r.tolerance, ep.c_str(), wm.c_str(),
                static_cast<long long>(r.reached), static_cast<long long>(r.runs));
  }
  for (const auto& [m, v] : s.table.final_values) std::printf("final %-12s %.6g\n", m.c_str(), v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic semismooth Newton solver for l1-regularized finite sums"};
  app.require_subcommand(1);

  std::string run_config;
  DataOverrides run_over;
  auto* run = app.add_subcommand("run", "Run the methods of an experiment file");
  run->add_option("config", run_config, "INI experiment file")->required()->check(CLI::ExistingFile);
  add_overrides(run, run_over);

  std::string diag_name;
  std::uint64_t diag_seed = 1;
  auto* diag = app.add_subcommand("diag", "Run a randomized inequality check and print a JSON report");
  diag->add_option("check", diag_name, "Check name")->required()->check(CLI::IsMember(diagnostic_names()));
  diag->add_option("--seed", diag_seed, "Random seed");

  std::string grid_config;
  DataOverrides grid_over;
  auto* grid = app.add_subcommand("grid-adagrad", "Grid-search the Adagrad step scale");
  grid->add_option("config", grid_config, "INI experiment file")->required()->check(CLI::ExistingFile);
  add_overrides(grid, grid_over);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig c = load_experiment_config(run_config);
      apply(run_over, c);
      const ExperimentSummary s = run_experiment(c);
      if (s.reference) std::printf("reference psi* = %.17g (||F|| = %.3g)\n", s.reference->psi, s.reference->full_res);
      print_table(s);
      return 0;
    }
    if (*diag) {
      const CheckReport r = run_diagnostic(diag_name, diag_seed);
      std::cout << to_json(r) << '\n';
      return r.passed() ? 0 : 1;
    }
    if (*grid) {
      ExperimentConfig c = load_experiment_config(grid_config);
      apply(grid_over, c);
      const GridResult g = grid_search_adagrad(c);
      for (const auto& [step, score] : g.scores) std::printf("%-8g %.6g\n", step, score);
      std::printf("best %g\n", g.best_step);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
