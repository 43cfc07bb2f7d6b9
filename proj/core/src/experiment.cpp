#include "s4n/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace s4n {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string MethodSpec::name() const {
  switch (kind) {
    case MethodKind::S4N_HG: return "s4n-hg" + std::to_string(cap_percent);
    case MethodKind::S4N_H: return "s4n-h";
    case MethodKind::S4N_VR: return "s4n-vr";
    case MethodKind::S2N_D: return "s2n-d";
    case MethodKind::Adagrad: return "adagrad";
    case MethodKind::ProxSVRG: return "prox-svrg";
  }
  return "?";
}

MethodSpec parse_method(std::string_view raw) {
  std::string name = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(std::string(raw)));
  if (name == "s4n-h") return {MethodKind::S4N_H, 100};
  if (name == "s4n-vr") return {MethodKind::S4N_VR, 100};
  if (name == "s2n-d") return {MethodKind::S2N_D, 100};
  if (name == "adagrad") return {MethodKind::Adagrad, 100};
  if (name == "prox-svrg") return {MethodKind::ProxSVRG, 100};
  if (name.rfind("s4n-hg", 0) == 0) {
    std::string digits = name.substr(6);
    if (!digits.empty() && digits.back() == '%') digits.pop_back();
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() <= 3) {
      const int cap = std::stoi(digits);
      if (cap >= 1 && cap <= 100) return {MethodKind::S4N_HG, cap};
    }
  }
  throw std::invalid_argument("unknown method '" + std::string(raw) + "'");
}

Index batch_fraction(double frac, Index N) {
  return std::clamp<Index>(static_cast<Index>(std::floor(frac * static_cast<double>(N))), 1, N);
}

OracleConfig s4n_oracle_preset(const MethodSpec& m, Index N, std::uint64_t seed) {
  OracleConfig oc;
  oc.seed = seed;
  const Index one = batch_fraction(0.01, N);
  const Index ten = batch_fraction(0.1, N);
  oc.hess_size0 = one;
  oc.hess_cap = ten;
  switch (m.kind) {
    case MethodKind::S4N_HG:
      oc.grad_size0 = one;
      oc.grad_cap = batch_fraction(m.cap_percent / 100.0, N);
      if (m.cap_percent == 10) {
        oc.hess_cap = one;
        oc.hess_growth = false;
      }
      break;
    case MethodKind::S4N_H:
      oc.grad_size0 = oc.grad_cap = N;
      break;
    case MethodKind::S4N_VR:
      oc.grad_size0 = oc.grad_cap = one;
      oc.vr_enabled = true;
      oc.vr_period = 6;
      break;
    case MethodKind::S2N_D:
      oc.grad_size0 = oc.grad_cap = oc.hess_size0 = oc.hess_cap = N;
      break;
    default:
      throw std::invalid_argument("s4n_oracle_preset: not an S4N method");
  }
  return oc;
}

NewtonConfig default_newton_config(LossKind loss) {
  NewtonConfig n;
  if (loss == LossKind::Sigmoid) {
    n.solver = SolverKind::MINRES;
    n.cg_maxit_total = 32;
  }
  return n;
}

std::shared_ptr<const SparseDataset> load_dataset(const DataSource& src) {
  SparseDataset ds = src.kind == DataSource::Kind::Libsvm ? load_libsvm(src.path, src.load) : synth_binary(src.synth);
  if (src.kind == DataSource::Kind::Synthetic && (src.load.max_points || src.load.max_features)) {
    ds = parse_libsvm(to_libsvm(ds), src.load);
  }
  if (src.scaling) ds = scale_features(ds, *src.scaling);
  return std::make_shared<const SparseDataset>(std::move(ds));
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("experiment: at least one method is required");
  const bool any_stochastic = std::any_of(methods.begin(), methods.end(), [](const MethodSpec& m) { return m.stochastic(); });
  if (any_stochastic && seeds.empty()) throw std::invalid_argument("experiment: seeds are required for stochastic methods");
  if (!(mu >= 0.0)) throw std::invalid_argument("experiment: mu must be >= 0");
  if (!(l2 >= 0.0)) throw std::invalid_argument("experiment: l2 must be >= 0");
  if (data.kind == DataSource::Kind::Libsvm && data.path.empty()) throw std::invalid_argument("experiment: data path missing");
  if (max_iters < 0 || check_every < 1 || !(max_epochs > 0.0)) throw std::invalid_argument("experiment: bad run limits");
  newton.validate();
  adagrad.validate();
  svrg.validate();
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::vector<std::string> parts;
  const std::string s(text);
  boost::algorithm::split(parts, s, boost::is_any_of(","));
  for (auto part : parts) {
    boost::algorithm::trim(part);
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad seed list entry '" + part + "'");
    }
  }
  return out;
}

namespace {

template <class T>
void read(const pt::ptree& tree, const char* key, T& target) {
  if (auto child = tree.get_child_optional(key)) target = child->get_value<T>();
}

template <class T>
void read(const pt::ptree& tree, const char* key, std::optional<T>& target) {
  if (auto child = tree.get_child_optional(key)) target = child->get_value<T>();
}

bool parse_bool(const std::string& v) {
  const std::string s = boost::algorithm::to_lower_copy(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("bad boolean '" + v + "'");
}

void read_bool(const pt::ptree& tree, const char* key, bool& target) {
  if (auto v = tree.get_optional<std::string>(key)) target = parse_bool(*v);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  ExperimentConfig c;
  try {
    const std::string source = tree.get<std::string>("data.source", "synthetic");
    if (source == "libsvm") {
      c.data.kind = DataSource::Kind::Libsvm;
      fs::path p = tree.get<std::string>("data.path", "");
      c.data.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (source != "synthetic" && source != "synth") {
      throw std::invalid_argument("config: unknown data.source '" + source + "'");
    }
    read(tree, "data.n_points", c.data.synth.n_points);
    read(tree, "data.n_features", c.data.synth.n_features);
    read(tree, "data.density", c.data.synth.density);
    read(tree, "data.noise", c.data.synth.noise);
    read(tree, "data.support", c.data.synth.support);
    read(tree, "data.seed", c.data.synth.seed);
    read(tree, "data.max_points", c.data.load.max_points);
    read(tree, "data.max_features", c.data.load.max_features);
    const std::string scaling = tree.get<std::string>("data.scaling", "per-feature");
    if (scaling == "none") {
      c.data.scaling.reset();
    } else if (scaling == "global") {
      c.data.scaling = ScalingMode::Global;
    } else if (scaling == "per-feature") {
      c.data.scaling = ScalingMode::PerFeature;
    } else {
      throw std::invalid_argument("config: unknown data.scaling '" + scaling + "'");
    }

    c.loss = parse_loss_kind(tree.get<std::string>("problem.loss", "logistic"));
    read(tree, "problem.mu", c.mu);
    read(tree, "problem.l2", c.l2);

    std::vector<std::string> names;
    const std::string methods = tree.get<std::string>("run.methods", "");
    boost::algorithm::split(names, methods, boost::is_any_of(","));
    for (const auto& n : names) {
      if (!boost::algorithm::trim_copy(n).empty()) c.methods.push_back(parse_method(n));
    }
    c.seeds = parse_seed_list(tree.get<std::string>("run.seeds", "1-50"));
    if (auto v = tree.get_optional<std::string>("run.output")) {
      fs::path p = *v;
      c.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (auto v = tree.get_optional<std::string>("run.cache_dir")) {
      fs::path p = *v;
      c.cache_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    read(tree, "run.max_iters", c.max_iters);
    read(tree, "run.max_epochs", c.max_epochs);
    read(tree, "run.stop_tol", c.stop_tol);
    read(tree, "run.check_every", c.check_every);
    read_bool(tree, "run.charge_termination", c.charge_termination);
    read_bool(tree, "run.deterministic_csv", c.deterministic_csv);
    if (auto v = tree.get_optional<std::string>("run.reference")) {
      if (*v == "compute") {
        c.compute_reference = true;
      } else if (*v == "none") {
        c.compute_reference = false;
      } else {
        throw std::invalid_argument("config: run.reference must be compute or none");
      }
    }
    read(tree, "run.reference_tol", c.reference_tol);
    read(tree, "run.reference_max_iters", c.reference_max_iters);

    c.newton = default_newton_config(c.loss);
    if (auto v = tree.get_optional<std::string>("newton.solver")) c.newton.solver = parse_solver_kind(*v);
    read(tree, "newton.cg_tol0", c.newton.cg_tol0);
    read(tree, "newton.cg_maxit0", c.newton.cg_maxit0);
    read(tree, "newton.cg_maxit_total", c.newton.cg_maxit_total);
    read(tree, "newton.reg_coeff", c.newton.reg_coeff);

    auto& s = c.s4n;
    read(tree, "s4n.eta", s.eta);
    read(tree, "s4n.p", s.p_exp);
    read(tree, "s4n.beta", s.beta);
    std::optional<double> c_nu;
    read(tree, "s4n.c_nu", c_nu);
    if (c_nu) s.nu_rule.coeff = s.eps1_rule.coeff = *c_nu;
    read(tree, "s4n.nu_exp", s.nu_rule.exponent);
    read(tree, "s4n.eps1_exp", s.eps1_rule.exponent);
    read(tree, "s4n.c_eps2", s.eps2_rule.coeff);
    read(tree, "s4n.eps2_exp", s.eps2_rule.exponent);
    read(tree, "s4n.alpha", s.alpha);
    read_bool(tree, "s4n.growth2", s.check_growth2);
    read(tree, "s4n.theta0", s.theta0);
    read(tree, "s4n.lambda0", s.lambda0);
    read(tree, "s4n.lambda_min", s.lambda_min);
    read(tree, "s4n.lambda_max", s.lambda_max);
    read(tree, "s4n.lambda_ema", s.lambda_ema);
    if (auto avg = tree.get_optional<std::string>("s4n.lambda_average")) s.lambda_average = parse_lambda_average(*avg);
    bool charge_h = true;
    read_bool(tree, "s4n.charge_hessian", charge_h);
    c.newton_charge_hessian = charge_h;

    read(tree, "adagrad.step", c.adagrad.step_scale);
    read(tree, "adagrad.delta", c.adagrad.delta);
    read(tree, "adagrad.batch_fraction", c.adagrad.batch_fraction);

    read(tree, "prox-svrg.batch_fraction", c.svrg.batch_fraction);
    read(tree, "prox-svrg.m", c.svrg.inner_period);
    read(tree, "prox-svrg.lambda0", c.svrg.lambda0);
    read(tree, "prox-svrg.lambda_max", c.svrg.lambda_max);
    read(tree, "prox-svrg.lambda_ema", c.svrg.lambda_ema);
    if (auto avg = tree.get_optional<std::string>("prox-svrg.lambda_average")) {
      c.svrg.lambda_average = parse_lambda_average(*avg);
    }
  } catch (const pt::ptree_bad_data& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string reference_key(const CompositeProblem& p) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(p.data().content_hash()));
  std::string key = std::string(hash) + "_" + std::string(to_string(p.loss())) + "_mu" + fmt17(p.reg_weight());
  if (p.l2_weight() != 0.0) key += "_l2" + fmt17(p.l2_weight());
  return key;
}

Reference compute_reference(const CompositeProblem& p, double tol, Index max_iters, const fs::path& cache_dir) {
  const fs::path file = cache_dir.empty() ? fs::path{} : cache_dir / ("ref_" + reference_key(p) + ".txt");
  if (!file.empty() && fs::exists(file)) {
    std::ifstream in(file);
    Reference r;
    std::string tag;
    Index n = 0;
    int conv = 0;
    in >> tag >> r.psi >> tag >> r.full_res >> tag >> conv >> tag >> n;
    if (in && n == p.dim()) {
      r.converged = conv != 0;
      r.x.resize(n);
      for (Index i = 0; i < n; ++i) in >> r.x(i);
      if (in) return r;
    }
  }

  S4NConfig cfg;
  cfg.stop_tol = tol;
  cfg.check_every = 1;
  cfg.max_iters = max_iters;
  const Trace t = s2nd_run(p, cfg, default_newton_config(p.loss()));
  Reference r;
  r.x = t.x;
  r.psi = objective(p, r.x);
  r.full_res = full_residual_norm(p, r.x);
  r.converged = t.summary.status == RunStatus::Converged;

  if (!file.empty()) {
    fs::create_directories(cache_dir);
    std::ofstream out(file);
    out << "psi " << fmt17(r.psi) << "\nfull_res " << fmt17(r.full_res) << "\nconverged " << (r.converged ? 1 : 0)
        << "\ndim " << r.x.size() << '\n';
    for (Index i = 0; i < r.x.size(); ++i) out << fmt17(r.x(i)) << '\n';
  }
  return r;
}

double relative_error(double psi, double psi_star) { return (psi - psi_star) / std::max(1.0, std::abs(psi_star)); }

Trace run_method(const CompositeProblem& p, const MethodSpec& m, const ExperimentConfig& cfg, std::uint64_t seed,
                 const IterationObserver& observer) {
  const Index N = p.n_points();
  switch (m.kind) {
    case MethodKind::Adagrad: {
      AdagradConfig a = cfg.adagrad;
      a.seed = seed;
      a.control.max_iters = cfg.max_iters;
      a.control.max_epochs = cfg.max_epochs;
      a.control.stop_tol = cfg.stop_tol;
      a.control.check_every = cfg.check_every;
      a.control.charge_termination = cfg.charge_termination;
      return adagrad_run(p, a);
    }
    case MethodKind::ProxSVRG: {
      ProxSvrgConfig s = cfg.svrg;
      s.seed = seed;
      s.control.max_iters = cfg.max_iters;
      s.control.max_epochs = cfg.max_epochs;
      s.control.stop_tol = cfg.stop_tol;
      s.control.check_every = cfg.check_every;
      s.control.charge_termination = cfg.charge_termination;
      return proxsvrg_run(p, s);
    }
    default: {
      OracleConfig oc = s4n_oracle_preset(m, N, seed);
      oc.charge_hessian = cfg.newton_charge_hessian;
      OracleState st(oc, N);
      S4NConfig s = cfg.s4n;
      s.max_iters = cfg.max_iters;
      s.max_epochs = cfg.max_epochs;
      s.stop_tol = cfg.stop_tol;
      s.check_every = cfg.check_every;
      s.charge_termination = cfg.charge_termination;
      return s4n_run(p, st, s, cfg.newton, observer);
    }
  }
}

std::optional<std::size_t> first_passage(const Trace& t, double tol, std::optional<double> psi_star) {
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    const double metric = psi_star ? relative_error(r.psi, *psi_star) : r.full_res;
    if (!std::isnan(metric) && metric <= tol) return i;
  }
  return std::nullopt;
}

std::vector<double> default_tolerance_grid() {
  std::vector<double> g;
  for (int e = 2; e <= 10; ++e) g.push_back(std::pow(10.0, -e));
  return g;
}

const ToleranceRow* SummaryTable::find(std::string_view method, double tol) const {
  for (const auto& r : rows) {
    if (r.method == method && r.tolerance == tol) return &r;
  }
  return nullptr;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  const double a = v[n / 2 - 1];
  const double b = v[n / 2];
  if (std::isinf(b)) return b;
  return 0.5 * (a + b);
}

double final_metric(const Trace& t, std::optional<double> psi_star) {
  if (psi_star) return relative_error(t.records.back().psi, *psi_star);
  for (auto it = t.records.rbegin(); it != t.records.rend(); ++it) {
    if (!std::isnan(it->full_res)) return it->full_res;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SummaryTable compare_summary(const MethodRuns& runs, std::optional<double> psi_star, const std::vector<double>& tols) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  SummaryTable table;
  for (const auto& [method, traces] : runs) {
    if (traces.empty()) continue;
    for (double tol : tols) {
      ToleranceRow row;
      row.method = method;
      row.tolerance = tol;
      row.runs = static_cast<Index>(traces.size());
      std::vector<double> ep;
      std::vector<double> wall;
      for (const auto& t : traces) {
        const auto i = first_passage(t, tol, psi_star);
        if (i) {
          ++row.reached;
          ep.push_back(t.records[*i].epochs);
          wall.push_back(t.records[*i].wall_ms);
        } else {
          ep.push_back(inf);
          wall.push_back(inf);
        }
      }
      const double me = median(ep);
      const double mw = median(wall);
      if (std::isfinite(me)) row.epochs = me;
      if (std::isfinite(mw)) row.wall_ms = mw;
      table.rows.push_back(row);
    }
    std::vector<double> finals;
    for (const auto& t : traces) finals.push_back(final_metric(t, psi_star));
    table.final_values.emplace_back(method, median(finals));
  }
  return table;
}

std::string to_csv(const SummaryTable& table) {
  std::string out = "method,tolerance,epochs,wall_ms,reached,runs\n";
  for (const auto& r : table.rows) {
    out += r.method + "," + fmt17(r.tolerance) + "," + (r.epochs ? fmt17(*r.epochs) : "unreached") + "," +
           (r.wall_ms ? fmt17(*r.wall_ms) : "unreached") + "," + std::to_string(r.reached) + "," +
           std::to_string(r.runs) + "\n";
  }
  return out;
}

MeanCurve mean_curve(const std::vector<Trace>& runs, std::optional<double> psi_star, std::size_t points) {
  MeanCurve c;
  if (runs.empty() || points < 2) return c;
  double max_ep = 0.0;
  double max_wall = 0.0;
  for (const auto& t : runs) {
    max_ep = std::max(max_ep, t.records.back().epochs);
    max_wall = std::max(max_wall, t.records.back().wall_ms);
  }
  auto sample = [&](auto field, double at, const Trace& t) {
    double v = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : t.records) {
      if (field(r) > at) break;
      const double m = psi_star ? relative_error(r.psi, *psi_star) : r.full_res;
      if (!std::isnan(m)) v = m;
    }
    return v;
  };
  auto average = [&](auto field, double at) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (const auto& t : runs) {
      const double v = sample(field, at, t);
      if (!std::isnan(v)) {
        sum += v;
        ++cnt;
      }
    }
    return cnt ? sum / static_cast<double>(cnt) : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t i = 0; i < points; ++i) {
    const double fe = max_ep * static_cast<double>(i) / static_cast<double>(points - 1);
    const double fw = max_wall * static_cast<double>(i) / static_cast<double>(points - 1);
    c.epochs.push_back(fe);
    c.metric_vs_epochs.push_back(average([](const TraceRecord& r) { return r.epochs; }, fe));
    c.wall_ms.push_back(fw);
    c.metric_vs_wall.push_back(average([](const TraceRecord& r) { return r.wall_ms; }, fw));
  }
  return c;
}

namespace {

bool convex_loss(LossKind k) { return k != LossKind::Sigmoid; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto data = load_dataset(cfg.data);
  const CompositeProblem p(data, cfg.loss, cfg.mu, cfg.l2);

  ExperimentSummary sum;
  if (cfg.compute_reference && convex_loss(cfg.loss)) {
    sum.reference = compute_reference(p, cfg.reference_tol, cfg.reference_max_iters, cfg.cache_dir);
  }
  const std::optional<double> psi_star = sum.reference ? std::optional<double>(sum.reference->psi) : std::nullopt;

  if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
  for (const auto& m : cfg.methods) {
    std::vector<Trace> traces;
    const std::vector<std::uint64_t> seeds = m.stochastic() ? cfg.seeds : std::vector<std::uint64_t>{0};
    for (auto seed : seeds) {
      traces.push_back(run_method(p, m, cfg, seed));
      if (!cfg.output_dir.empty()) {
        CsvOptions o;
        o.wall_time = !cfg.deterministic_csv;
        write_trace_csv(traces.back(), cfg.output_dir / (m.name() + "_seed" + std::to_string(seed) + ".csv"), o);
      }
    }
    if (!cfg.output_dir.empty()) {
      const MeanCurve c = mean_curve(traces, psi_star);
      std::string out = "epochs,metric_vs_epochs,wall_ms,metric_vs_wall\n";
      for (std::size_t i = 0; i < c.epochs.size(); ++i) {
        out += fmt17(c.epochs[i]) + "," + fmt17(c.metric_vs_epochs[i]) + "," + fmt17(c.wall_ms[i]) + "," +
               fmt17(c.metric_vs_wall[i]) + "\n";
      }
      write_text(cfg.output_dir / (m.name() + "_mean.csv"), out);
    }
    sum.runs.emplace_back(m.name(), std::move(traces));
  }
  sum.table = compare_summary(sum.runs, psi_star);
  if (!cfg.output_dir.empty()) write_text(cfg.output_dir / "summary.csv", to_csv(sum.table));
  return sum;
}

GridResult grid_search_adagrad(const ExperimentConfig& cfg) {
  const auto data = load_dataset(cfg.data);
  const CompositeProblem p(data, cfg.loss, cfg.mu, cfg.l2);
  const Reference ref = compute_reference(p, cfg.reference_tol, cfg.reference_max_iters, cfg.cache_dir);
  if (cfg.seeds.empty()) throw std::invalid_argument("grid_search_adagrad: seeds are required");

  GridResult g;
  double best = std::numeric_limits<double>::infinity();
  for (double step : adagrad_step_grid()) {
    ExperimentConfig c = cfg;
    c.adagrad.step_scale = step;
    std::vector<double> finals;
    for (auto seed : cfg.seeds) {
      const Trace t = run_method(p, MethodSpec{MethodKind::Adagrad, 100}, c, seed);
      const double e = relative_error(t.records.back().psi, ref.psi);
      finals.push_back(std::isfinite(e) ? e : std::numeric_limits<double>::infinity());
    }
    const double score = median(finals);
    g.scores.emplace_back(step, score);
    if (score < best) {
      best = score;
      g.best_step = step;
    }
  }
  return g;
}

}  // namespace s4n
