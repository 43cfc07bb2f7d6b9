#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "s4n/model.hpp"

namespace s4n {

/// Outcome of a randomized inequality check. `max_slack` is the largest
/// observed lhs - rhs (negative when every trial holds with room to spare).
struct CheckReport {
  std::string name;
  Index trials = 0;
  Index violations = 0;
  double max_slack = 0.0;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> metrics;

  [[nodiscard]] bool passed() const noexcept { return violations == 0; }
  void add(std::string key, double value) { metrics.emplace_back(std::move(key), value); }
};

std::string to_json(const CheckReport& report);

// ---- metric change -------------------------------------------------------

/// Factor c with ||F^{lam1}(x)|| <= c ||F^{lam2}(x)|| for metrics (1/lam_i) I,
/// evaluated through the general eigenvalue formula with W = (lam2/lam1) I.
double metric_bound_factor(double lam1, double lam2);

/// ||F^{lam1}|| - factor * ||F^{lam2}|| at (x, g).
double metric_bound_slack(const Vector& x, const Vector& g, double lam1, double lam2, double mu);

/// Random (x, g, lam1, lam2) with lam log-uniform on [lam_lo, lam_hi]. Slack is
/// relative to the largest magnitude entering either residual.
CheckReport check_metric_bound(Index dim, double mu, Index trials, std::uint64_t seed, double lam_lo = 1e-3,
                               double lam_hi = 1e4);

// ---- binary-sequence recursion ------------------------------------------

struct GenConvParams {
  double a0 = 1.0;
  double eta = 0.85;
  double p = 0.5;
  double q = 0.5;
  std::vector<double> nu;
  std::vector<double> eps;

  void validate() const;
  /// exp(sum(nu) / eta).
  [[nodiscard]] double c_nu() const;
};

struct GenConvResult {
  std::vector<double> a;
  double c_nu = 0.0;
  /// C_nu (a0 + sum eps).
  double bound_sup = 0.0;
  /// C_nu^q / (1 - eta^q) ((eta a0)^q + sum eps^q).
  double bound_sum = 0.0;
  double max_a = 0.0;
  double weighted_sum = 0.0;
  Index violations = 0;
};

/// a_{k+1} = (eta + nu_k)^{Y_k} a_k + Y_k eps_k over the horizon |Y|.
GenConvResult genconv_simulate(const GenConvParams& gp, const std::vector<int>& Y);

CheckReport check_genconv(Index trials, Index horizon, std::uint64_t seed);

// ---- prox-gradient descent ----------------------------------------------

/// 2 (1 - gamma rho) / (lambda L).
double prox_descent_alpha_bar(double gamma, double rho, double lambda, double L);

/// psi(x + alpha v) - psi(x) - [-alpha gamma ||v||^2/lambda + alpha lambda/(4 gamma (rho-1)) ||grad f - G||^2].
double prox_descent_slack(const CompositeProblem& p, const Vector& x, const Vector& g, double lambda, double alpha,
                          double gamma, double rho);

/// Random x, lambda and alpha in [0, min(1, alpha_bar)]. Half the trials use
/// the full gradient, the rest random sub-batches.
CheckReport check_prox_descent(const CompositeProblem& p, double gamma, double rho, Index trials, std::uint64_t seed);

// ---- strong-convexity error bound ---------------------------------------

/// Constants of the error bound ||x - x*||^2 <= B1 ||F||^2 + B2 ||grad f - G||^2
/// for metrics with lambda_m I <= Lambda <= lambda_M I.
struct StrongConvexityCerts {
  double mu_f = 0.0;
  double mu_r = 0.0;
  double mu_bar = 0.0;
  double L = 0.0;
  double lambda_m = 0.0;
  double lambda_M = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  static StrongConvexityCerts make(double mu_f, double mu_r, double L, double lambda_m, double lambda_M);

  [[nodiscard]] double alpha(double tau) const;
  [[nodiscard]] double B1(double tau) const;
  [[nodiscard]] double B2(double tau) const;
  /// (1+tau)(1+a)(b1 + tau + (1+a) b2)/(a mu_bar) at a given a; minimized by alpha(tau).
  [[nodiscard]] double B1_at(double tau, double a) const;
};

/// Random x around x_star, random metric lambda in [1/lambda_M, 1/lambda_m],
/// random batches; the first half of the trials use the full gradient with B1(0).
CheckReport check_strconv_bound(const CompositeProblem& p, const StrongConvexityCerts& certs, const Vector& x_star,
                                double tau, Index trials, std::uint64_t seed);

/// 1 + sqrt(lM/lm) + L sqrt(lM/lm^3), bounds on the metric eigenvalues.
double residual_lipschitz_constant(double lambda_m, double lambda_M, double L);

// ---- concentration ------------------------------------------------------

enum class ConcentrationKind {
  /// Standard normal vectors, sigma_k^2 = dim, bound tau^-2 at tau ||sigma||.
  Vector,
  /// Uniform directions of norm R, bound exp(-tau^2/3) at (1 + tau) ||sigma||.
  VectorLightTail,
  /// (G + G^T)/sqrt(2), sigma_k^2 = n(n+1), bound kappa_n tau^-2.
  Matrix,
  /// +-R u u^T with uniform unit u, bound 2n exp(-tau^2/3).
  MatrixLightTail,
};

std::string_view to_string(ConcentrationKind kind);
ConcentrationKind parse_concentration_kind(std::string_view name);

/// Tail bound for the given kind at tau.
double concentration_bound(ConcentrationKind kind, Index dim, double tau);

/// Monte Carlo tail frequency of ||sum_{k<=m} X_k||; passes when the frequency is
/// at most bound + 3 sqrt(bound (1 - bound) / trials).
CheckReport concentration_mc(Index dim, Index m, ConcentrationKind kind, Index trials, double tau, std::uint64_t seed);

// ---- named entry points --------------------------------------------------

std::vector<std::string> diagnostic_names();

/// Runs one named check with its default configuration.
CheckReport run_diagnostic(std::string_view name, std::uint64_t seed = 1);

}  // namespace s4n
