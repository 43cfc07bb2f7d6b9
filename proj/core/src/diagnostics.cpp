#include "s4n/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "s4n/driver.hpp"
#include "s4n/oracles.hpp"
#include "s4n/prox.hpp"

namespace s4n {

std::string to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.name;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["max_slack"] = r.max_slack;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed();
  auto& m = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) m[k] = v;
  return j.dump(2);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Vector gaussian_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

Vector unit_vector(std::mt19937_64& rng, Index n) {
  for (;;) {
    Vector v = gaussian_vector(rng, n);
    const double nv = v.norm();
    if (nv > 0.0) return v / nv;
  }
}

void tally(CheckReport& r, double scaled_slack) {
  ++r.trials;
  r.max_slack = std::max(r.max_slack, scaled_slack);
  if (!(scaled_slack <= r.tolerance)) ++r.violations;
}

}  // namespace

// ---- metric change -------------------------------------------------------

double metric_bound_factor(double lam1, double lam2) {
  if (!(lam1 > 0.0 && lam2 > 0.0)) throw std::invalid_argument("metric_bound_factor: lambdas must be > 0");
  const double w = lam2 / lam1;
  const double w_max = w;
  const double w_min = w;
  const double lead = (1.0 + w_max + std::sqrt(std::max(0.0, 1.0 - 2.0 * w_min + w_max * w_max))) / 2.0;
  const double ratio = (1.0 / lam2) / (1.0 / lam1);
  return lead * ratio;
}

double metric_bound_slack(const Vector& x, const Vector& g, double lam1, double lam2, double mu) {
  const double f1 = residual(x, g, ProxMetric(lam1), mu).norm();
  const double f2 = residual(x, g, ProxMetric(lam2), mu).norm();
  return f1 - metric_bound_factor(lam1, lam2) * f2;
}

CheckReport check_metric_bound(Index dim, double mu, Index trials, std::uint64_t seed, double lam_lo, double lam_hi) {
  CheckReport r;
  r.name = "metric-bound";
  r.tolerance = 1e-12;
  r.max_slack = kNegInf;
  std::mt19937_64 rng(seed);
  for (Index t = 0; t < trials; ++t) {
    const Vector x = gaussian_vector(rng, dim, log_uniform(rng, 1e-2, 1e2));
    const Vector g = gaussian_vector(rng, dim, log_uniform(rng, 1e-2, 1e2));
    const double lam1 = log_uniform(rng, lam_lo, lam_hi);
    const double lam2 = log_uniform(rng, lam_lo, lam_hi);
    const double f1 = residual(x, g, ProxMetric(lam1), mu).norm();
    const double c = metric_bound_factor(lam1, lam2);
    const double scale = std::max({1.0, f1, x.norm() + lam1 * g.norm(), c * (x.norm() + lam2 * g.norm())});
    tally(r, metric_bound_slack(x, g, lam1, lam2, mu) / scale);
  }
  r.add("mu", mu);
  r.add("dim", static_cast<double>(dim));
  return r;
}

// ---- binary-sequence recursion ------------------------------------------

void GenConvParams::validate() const {
  if (!(a0 >= 0.0)) throw std::invalid_argument("GenConvParams: a0 must be >= 0");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("GenConvParams: eta must lie in (0, 1)");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("GenConvParams: p must lie in (0, 1]");
  if (!(q >= p && q <= 1.0)) throw std::invalid_argument("GenConvParams: q must lie in [p, 1]");
  for (double v : nu) {
    if (!(v >= 0.0)) throw std::invalid_argument("GenConvParams: nu must be >= 0");
  }
  for (double v : eps) {
    if (!(v >= 0.0)) throw std::invalid_argument("GenConvParams: eps must be >= 0");
  }
}

double GenConvParams::c_nu() const { return std::exp(std::accumulate(nu.begin(), nu.end(), 0.0) / eta); }

GenConvResult genconv_simulate(const GenConvParams& gp, const std::vector<int>& Y) {
  gp.validate();
  const std::size_t R = Y.size();
  if (gp.nu.size() < R || gp.eps.size() < R) throw std::invalid_argument("genconv_simulate: sequences shorter than Y");

  GenConvResult out;
  out.c_nu = gp.c_nu();
  double sum_eps = 0.0;
  double sum_eps_q = 0.0;
  for (std::size_t k = 0; k < R; ++k) {
    sum_eps += gp.eps[k];
    sum_eps_q += std::pow(gp.eps[k], gp.q);
  }
  out.bound_sup = out.c_nu * (gp.a0 + sum_eps);
  out.bound_sum = std::pow(out.c_nu, gp.q) / (1.0 - std::pow(gp.eta, gp.q)) * (std::pow(gp.eta * gp.a0, gp.q) + sum_eps_q);

  out.a.reserve(R + 1);
  out.a.push_back(gp.a0);
  double a = gp.a0;
  for (std::size_t k = 0; k < R; ++k) {
    if (Y[k] != 0) a = (gp.eta + gp.nu[k]) * a + gp.eps[k];
    out.a.push_back(a);
    out.max_a = std::max(out.max_a, a);
    if (Y[k] != 0) out.weighted_sum += std::pow(a, gp.q);
    if (a > out.bound_sup * (1.0 + 1e-12)) ++out.violations;
  }
  if (out.weighted_sum > out.bound_sum * (1.0 + 1e-12)) ++out.violations;
  return out;
}

CheckReport check_genconv(Index trials, Index horizon, std::uint64_t seed) {
  CheckReport r;
  r.name = "genconv";
  r.tolerance = 1e-12;
  r.max_slack = kNegInf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index t = 0; t < trials; ++t) {
    GenConvParams gp;
    gp.a0 = log_uniform(rng, 1e-3, 1e3);
    gp.eta = 0.05 + 0.9 * unif(rng);
    gp.p = 0.1 + 0.9 * unif(rng);
    gp.q = gp.p + (1.0 - gp.p) * unif(rng);
    const double nu_c = unif(rng);
    const double nu_e = 1.05 + 2.0 * unif(rng);
    const double eps_c = log_uniform(rng, 1e-3, 1e2);
    const double eps_e = (1.0 + 0.05 + 2.0 * unif(rng)) / gp.p;
    const double prob = unif(rng);
    std::vector<int> Y(static_cast<std::size_t>(horizon));
    gp.nu.resize(Y.size());
    gp.eps.resize(Y.size());
    for (std::size_t k = 0; k < Y.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      gp.nu[k] = nu_c * std::pow(kk, -nu_e);
      gp.eps[k] = eps_c * std::pow(kk, -eps_e);
      Y[k] = unif(rng) < prob ? 1 : 0;
    }
    const GenConvResult res = genconv_simulate(gp, Y);
    const double s1 = (res.max_a - res.bound_sup) / std::max(1.0, res.bound_sup);
    const double s2 = (res.weighted_sum - res.bound_sum) / std::max(1.0, res.bound_sum);
    tally(r, std::max(s1, s2));
  }
  r.add("horizon", static_cast<double>(horizon));
  return r;
}

// ---- prox-gradient descent ----------------------------------------------

double prox_descent_alpha_bar(double gamma, double rho, double lambda, double L) {
  return 2.0 * (1.0 - gamma * rho) / (lambda * L);
}

double prox_descent_slack(const CompositeProblem& p, const Vector& x, const Vector& g, double lambda, double alpha,
                          double gamma, double rho) {
  const Vector v = -residual(x, g, ProxMetric(lambda), p.reg_weight());
  const double err2 = (full_gradient(p, x) - g).squaredNorm();
  const double lhs = objective(p, x + alpha * v) - objective(p, x);
  const double rhs = -alpha * gamma * v.squaredNorm() / lambda + alpha * lambda / (4.0 * gamma * (rho - 1.0)) * err2;
  return lhs - rhs;
}

CheckReport check_prox_descent(const CompositeProblem& p, double gamma, double rho, Index trials, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("check_prox_descent: gamma must lie in (0, 1)");
  if (!(rho > 1.0 && rho < 1.0 / gamma)) throw std::invalid_argument("check_prox_descent: rho must lie in (1, 1/gamma)");
  CheckReport r;
  r.name = "prox-descent";
  r.tolerance = 1e-12;
  r.max_slack = kNegInf;
  const double L = lipschitz_upper_bound(p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index N = p.n_points();
  for (Index t = 0; t < trials; ++t) {
    const Vector x = gaussian_vector(rng, p.dim(), log_uniform(rng, 1e-2, 1e1));
    const double lambda = log_uniform(rng, 1e-2, 1e2);
    const double alpha = unif(rng) * std::min(1.0, prox_descent_alpha_bar(gamma, rho, lambda, L));
    Vector g;
    if (t % 2 == 0) {
      g = full_gradient(p, x);
    } else {
      const Index m = 1 + static_cast<Index>(unif(rng) * static_cast<double>(N - 1));
      g = loss_grad(p, x, sample_without_replacement(N, m, rng));
    }
    const double scale = std::max(1.0, std::abs(objective(p, x)));
    tally(r, prox_descent_slack(p, x, g, lambda, alpha, gamma, rho) / scale);
  }
  r.add("gamma", gamma);
  r.add("rho", rho);
  r.add("L", L);
  return r;
}

// ---- strong-convexity error bound ---------------------------------------

StrongConvexityCerts StrongConvexityCerts::make(double mu_f, double mu_r, double L, double lambda_m, double lambda_M) {
  StrongConvexityCerts c;
  c.mu_f = mu_f;
  c.mu_r = mu_r;
  c.mu_bar = mu_f + mu_r;
  c.L = L;
  c.lambda_m = lambda_m;
  c.lambda_M = lambda_M;
  if (!(c.mu_bar > 0.0)) throw std::invalid_argument("StrongConvexityCerts: mu_f + mu_r must be > 0");
  if (!(std::abs(mu_f) <= L)) throw std::invalid_argument("StrongConvexityCerts: |mu_f| must not exceed L");
  if (!(lambda_m > 0.0 && lambda_m <= lambda_M)) throw std::invalid_argument("StrongConvexityCerts: bad metric bounds");
  c.b1 = L - 2.0 * lambda_m - mu_r;
  c.b2 = (lambda_M + mu_r) * (lambda_M + mu_r) / c.mu_bar;
  if (!(c.b2 > 0.0)) throw std::invalid_argument("StrongConvexityCerts: b2 must be > 0");
  return c;
}

double StrongConvexityCerts::alpha(double tau) const {
  const double c = b1 + b2 + tau;
  if (!(c > 0.0)) throw std::domain_error("StrongConvexityCerts: b1 + b2 + tau must be > 0");
  return std::sqrt(c / b2);
}

double StrongConvexityCerts::B1(double tau) const {
  const double c = b1 + b2 + tau;
  if (!(c > 0.0)) throw std::domain_error("StrongConvexityCerts: b1 + b2 + tau must be > 0");
  const double s = std::sqrt(c) + std::sqrt(b2);
  return (1.0 + tau) / mu_bar * s * s;
}

double StrongConvexityCerts::B2(double tau) const {
  if (!(tau > 0.0)) throw std::domain_error("StrongConvexityCerts: B2 needs tau > 0");
  const double a = alpha(tau);
  return (1.0 + tau) * (1.0 + a) * (a * mu_bar + (1.0 + tau) * (1.0 + a)) / (tau * a * a * mu_bar * mu_bar);
}

double StrongConvexityCerts::B1_at(double tau, double a) const {
  return (1.0 + tau) * (1.0 + a) * (b1 + tau + (1.0 + a) * b2) / (a * mu_bar);
}

CheckReport check_strconv_bound(const CompositeProblem& p, const StrongConvexityCerts& certs, const Vector& x_star,
                                double tau, Index trials, std::uint64_t seed) {
  CheckReport r;
  r.name = "strconv-bound";
  r.tolerance = 1e-10;
  r.max_slack = kNegInf;
  const double B1_full = certs.B1(0.0);
  const double B1 = certs.B1(tau);
  const double B2 = certs.B2(tau);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index N = p.n_points();
  const Index half = trials / 2;
  for (Index t = 0; t < trials; ++t) {
    const Vector x = x_star + unit_vector(rng, p.dim()) * log_uniform(rng, 1e-4, 1e1);
    const double lambda = 1.0 / (certs.lambda_m + unif(rng) * (certs.lambda_M - certs.lambda_m));
    const Vector gf = full_gradient(p, x);
    const double lhs = (x - x_star).squaredNorm();
    double rhs = 0.0;
    if (t < half) {
      rhs = B1_full * residual(x, gf, ProxMetric(lambda), p.reg_weight()).squaredNorm();
    } else {
      const Index m = 1 + static_cast<Index>(unif(rng) * static_cast<double>(N - 1));
      const Vector g = loss_grad(p, x, sample_without_replacement(N, m, rng));
      rhs = B1 * residual(x, g, ProxMetric(lambda), p.reg_weight()).squaredNorm() + B2 * (gf - g).squaredNorm();
    }
    tally(r, (lhs - rhs) / std::max({lhs, rhs, std::numeric_limits<double>::min()}));
  }
  r.add("tau", tau);
  r.add("b1", certs.b1);
  r.add("b2", certs.b2);
  r.add("alpha", certs.alpha(tau));
  r.add("B1_0", B1_full);
  r.add("B1", B1);
  r.add("B2", B2);
  return r;
}

double residual_lipschitz_constant(double lambda_m, double lambda_M, double L) {
  return 1.0 + std::sqrt(lambda_M / lambda_m) + L * std::sqrt(lambda_M / (lambda_m * lambda_m * lambda_m));
}

// ---- concentration ------------------------------------------------------

std::string_view to_string(ConcentrationKind kind) {
  switch (kind) {
    case ConcentrationKind::Vector: return "vector";
    case ConcentrationKind::VectorLightTail: return "vector-light";
    case ConcentrationKind::Matrix: return "matrix";
    case ConcentrationKind::MatrixLightTail: return "matrix-light";
  }
  return "?";
}

ConcentrationKind parse_concentration_kind(std::string_view name) {
  for (auto k : {ConcentrationKind::Vector, ConcentrationKind::VectorLightTail, ConcentrationKind::Matrix,
                 ConcentrationKind::MatrixLightTail}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown concentration kind '" + std::string(name) + "'");
}

double concentration_bound(ConcentrationKind kind, Index dim, double tau) {
  const double n = static_cast<double>(dim);
  switch (kind) {
    case ConcentrationKind::Vector: return 1.0 / (tau * tau);
    case ConcentrationKind::VectorLightTail: return std::exp(-tau * tau / 3.0);
    case ConcentrationKind::Matrix: return (2.0 * std::log(n + 2.0) - 1.0) * std::exp(1.0) / (tau * tau);
    case ConcentrationKind::MatrixLightTail: return 2.0 * n * std::exp(-tau * tau / 3.0);
  }
  return 1.0;
}

CheckReport concentration_mc(Index dim, Index m, ConcentrationKind kind, Index trials, double tau, std::uint64_t seed) {
  if (dim < 1 || m < 1 || trials < 1 || !(tau > 0.0)) throw std::invalid_argument("concentration_mc: bad arguments");
  CheckReport r;
  r.name = "concentration-" + std::string(to_string(kind));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::bernoulli_distribution coin(0.5);
  const double md = static_cast<double>(m);
  const double n = static_cast<double>(dim);
  constexpr double R = 1.0;

  double sigma_norm = 0.0;
  double threshold = 0.0;
  switch (kind) {
    case ConcentrationKind::Vector:
      sigma_norm = std::sqrt(md * n);
      threshold = tau * sigma_norm;
      break;
    case ConcentrationKind::VectorLightTail:
      sigma_norm = std::sqrt(md) * R;
      threshold = (1.0 + tau) * sigma_norm;
      break;
    case ConcentrationKind::Matrix:
      sigma_norm = std::sqrt(md * n * (n + 1.0));
      threshold = tau * sigma_norm;
      break;
    case ConcentrationKind::MatrixLightTail:
      sigma_norm = std::sqrt(md) * R;
      threshold = tau * sigma_norm;
      break;
  }

  Index hits = 0;
  const bool matrix = kind == ConcentrationKind::Matrix || kind == ConcentrationKind::MatrixLightTail;
  Vector vsum(dim);
  Eigen::MatrixXd msum(dim, dim);
  Eigen::MatrixXd G(dim, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  for (Index t = 0; t < trials; ++t) {
    double norm = 0.0;
    if (!matrix) {
      vsum.setZero();
      for (Index k = 0; k < m; ++k) {
        if (kind == ConcentrationKind::Vector) {
          for (Index i = 0; i < dim; ++i) vsum(i) += nd(rng);
        } else {
          vsum += R * unit_vector(rng, dim);
        }
      }
      norm = vsum.norm();
    } else {
      msum.setZero();
      for (Index k = 0; k < m; ++k) {
        if (kind == ConcentrationKind::Matrix) {
          for (Index j = 0; j < dim; ++j) {
            for (Index i = 0; i < dim; ++i) G(i, j) = nd(rng);
          }
          msum += (G + G.transpose()) / std::sqrt(2.0);
        } else {
          const Vector u = unit_vector(rng, dim);
          msum += (coin(rng) ? R : -R) * (u * u.transpose());
        }
      }
      eig.compute(msum, Eigen::EigenvaluesOnly);
      norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (norm >= threshold) ++hits;
  }

  const double freq = static_cast<double>(hits) / static_cast<double>(trials);
  const double bound = concentration_bound(kind, dim, tau);
  const double bc = std::clamp(bound, 0.0, 1.0);
  const double mc_sigma = std::sqrt(bc * (1.0 - bc) / static_cast<double>(trials));
  r.trials = trials;
  r.tolerance = 0.0;
  r.max_slack = freq - (bound + 3.0 * mc_sigma);
  r.violations = r.max_slack <= 0.0 ? 0 : 1;
  r.add("dim", n);
  r.add("m", md);
  r.add("tau", tau);
  r.add("threshold", threshold);
  r.add("frequency", freq);
  r.add("bound", bound);
  r.add("mc_sigma", mc_sigma);
  return r;
}

// ---- named entry points --------------------------------------------------

std::vector<std::string> diagnostic_names() {
  return {"metric-bound",         "genconv",           "prox-descent",         "strconv-bound",
          "concentration-vector", "concentration-vector-light", "concentration-matrix", "concentration-matrix-light"};
}

namespace {

std::shared_ptr<const SparseDataset> diagnostic_dataset(std::uint64_t seed) {
  SynthOptions so;
  so.n_points = 300;
  so.n_features = 20;
  so.density = 0.3;
  so.noise = 0.05;
  so.seed = seed;
  return std::make_shared<const SparseDataset>(scale_features(synth_binary(so)));
}

}  // namespace

CheckReport run_diagnostic(std::string_view name, std::uint64_t seed) {
  if (name == "metric-bound") {
    CheckReport r = check_metric_bound(10, 0.1, 10000, seed);
    const CheckReport r0 = check_metric_bound(10, 0.0, 10000, seed + 1);
    r.trials += r0.trials;
    r.violations += r0.violations;
    r.max_slack = std::max(r.max_slack, r0.max_slack);
    return r;
  }
  if (name == "genconv") return check_genconv(1000, 200, seed);
  if (name == "prox-descent") {
    const CompositeProblem p(diagnostic_dataset(seed), LossKind::Logistic, 0.01);
    return check_prox_descent(p, 0.5, 1.5, 1000, seed);
  }
  if (name == "strconv-bound") {
    constexpr double aug = 0.1;
    const CompositeProblem p(diagnostic_dataset(seed), LossKind::Logistic, 0.01, aug);
    S4NConfig cfg;
    cfg.stop_tol = 1e-12;
    cfg.check_every = 1;
    cfg.max_iters = 500;
    const Trace ref = s2nd_run(p, cfg, NewtonConfig{});
    if (ref.summary.status != RunStatus::Converged) throw std::runtime_error("strconv-bound: reference solve did not converge");
    const auto certs = StrongConvexityCerts::make(aug, 0.0, lipschitz_upper_bound(p), 0.1, 10.0);
    return check_strconv_bound(p, certs, ref.x, 0.5, 1000, seed);
  }
  if (name == "concentration-vector") return concentration_mc(10, 100, ConcentrationKind::Vector, 100000, 3.0, seed);
  if (name == "concentration-vector-light") {
    return concentration_mc(10, 100, ConcentrationKind::VectorLightTail, 100000, 1.0, seed);
  }
  if (name == "concentration-matrix") return concentration_mc(8, 10, ConcentrationKind::Matrix, 100000, 4.0, seed);
  if (name == "concentration-matrix-light") {
    return concentration_mc(8, 10, ConcentrationKind::MatrixLightTail, 100000, 3.5, seed);
  }
  throw std::invalid_argument("unknown diagnostic '" + std::string(name) + "'");
}

}  // namespace s4n
