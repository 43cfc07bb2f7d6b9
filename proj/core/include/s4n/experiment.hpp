#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "s4n/baselines.hpp"
#include "s4n/dataset.hpp"
#include "s4n/driver.hpp"

namespace s4n {

enum class MethodKind { S4N_HG, S4N_H, S4N_VR, S2N_D, Adagrad, ProxSVRG };

struct MethodSpec {
  MethodKind kind = MethodKind::S4N_HG;
  /// Gradient batch cap in percent of N (S4N_HG only).
  int cap_percent = 100;

  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool stochastic() const noexcept { return kind != MethodKind::S2N_D; }
  bool operator==(const MethodSpec&) const = default;
};

/// Accepts s4n-hg10, s4n-hg50, s4n-hg100 (any 1..100), s4n-h, s4n-vr, s2n-d, adagrad, prox-svrg.
MethodSpec parse_method(std::string_view name);

/// floor(frac * N), at least 1.
Index batch_fraction(double frac, Index N);

/// Sample-size presets of the S4N variants for a data set with N points.
OracleConfig s4n_oracle_preset(const MethodSpec& m, Index N, std::uint64_t seed);

/// CG with total cap 12 for convex losses, MINRES with cap 32 for the sigmoid loss.
NewtonConfig default_newton_config(LossKind loss);

struct DataSource {
  enum class Kind { Synthetic, Libsvm };
  Kind kind = Kind::Synthetic;
  std::filesystem::path path;
  SynthOptions synth;
  LoadOptions load;
  /// Empty means no scaling.
  std::optional<ScalingMode> scaling = ScalingMode::PerFeature;
};

std::shared_ptr<const SparseDataset> load_dataset(const DataSource& src);

struct ExperimentConfig {
  DataSource data;
  LossKind loss = LossKind::Logistic;
  double mu = 0.01;
  double l2 = 0.0;

  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
  /// Empty disables the reference cache.
  std::filesystem::path cache_dir;

  bool compute_reference = true;
  double reference_tol = 1e-12;
  Index reference_max_iters = 2000;

  Index max_iters = 1000;
  double max_epochs = 50.0;
  double stop_tol = 1e-10;
  Index check_every = 10;
  bool charge_termination = false;
  /// Write wall_ms = 0 in per-run CSV files.
  bool deterministic_csv = false;

  S4NConfig s4n;
  NewtonConfig newton;
  /// Charge Hessian-vector products to the epoch counter.
  bool newton_charge_hessian = true;
  AdagradConfig adagrad;
  ProxSvrgConfig svrg;

  void validate() const;
};

/// Parses the INI-style experiment file. Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// "1-5" or "1,2,7" or a mix.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct Reference {
  Vector x;
  double psi = 0.0;
  double full_res = 0.0;
  bool converged = false;
};

/// Cache key built from the data hash, loss, mu and l2 weight.
std::string reference_key(const CompositeProblem& p);

/// Deterministic solve to ||F^I|| <= tol, reusing a cached solution when present.
Reference compute_reference(const CompositeProblem& p, double tol, Index max_iters,
                            const std::filesystem::path& cache_dir = {});

/// (psi - psi*) / max(1, |psi*|).
double relative_error(double psi, double psi_star);

/// `observer` is called on every iteration of the S4N variants and ignored by the baselines.
Trace run_method(const CompositeProblem& p, const MethodSpec& m, const ExperimentConfig& cfg, std::uint64_t seed,
                 const IterationObserver& observer = {});

using MethodRuns = std::vector<std::pair<std::string, std::vector<Trace>>>;

/// Index of the first record whose error metric is <= tol. The metric is the
/// relative error when `psi_star` is given and the full residual otherwise.
std::optional<std::size_t> first_passage(const Trace& t, double tol, std::optional<double> psi_star);

/// 1e-2, 1e-3, ..., 1e-10.
std::vector<double> default_tolerance_grid();

struct ToleranceRow {
  std::string method;
  double tolerance = 0.0;
  /// Medians over runs; unreached runs count as +inf, so an empty value means
  /// the median run did not reach the tolerance.
  std::optional<double> epochs;
  std::optional<double> wall_ms;
  Index reached = 0;
  Index runs = 0;
};

struct SummaryTable {
  std::vector<ToleranceRow> rows;
  /// Per method: median final metric over runs.
  std::vector<std::pair<std::string, double>> final_values;

  [[nodiscard]] const ToleranceRow* find(std::string_view method, double tol) const;
};

SummaryTable compare_summary(const MethodRuns& runs, std::optional<double> psi_star,
                             const std::vector<double>& tolerances = default_tolerance_grid());

/// method,tolerance,epochs,wall_ms,reached,runs with "unreached" for empty medians.
std::string to_csv(const SummaryTable& table);

struct MeanCurve {
  std::vector<double> epochs;
  std::vector<double> metric_vs_epochs;
  std::vector<double> wall_ms;
  std::vector<double> metric_vs_wall;
};

/// Averages piecewise-constant metric curves over runs on uniform epoch and time grids.
MeanCurve mean_curve(const std::vector<Trace>& runs, std::optional<double> psi_star, std::size_t points = 200);

struct ExperimentSummary {
  std::optional<Reference> reference;
  MethodRuns runs;
  SummaryTable table;
};

/// Runs every (method, seed), writes per-run traces, mean curves and the
/// summary table to cfg.output_dir when it is set.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

struct GridResult {
  /// (step scale, median final relative error)
  std::vector<std::pair<double, double>> scores;
  double best_step = 0.0;
};

/// Tries every Adagrad step scale of the standard grid and keeps the one with
/// the smallest median final relative error.
GridResult grid_search_adagrad(const ExperimentConfig& cfg);

}  // namespace s4n
