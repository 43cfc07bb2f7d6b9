#include "s4n/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace s4n {

std::string_view to_string(StepType t) {
  switch (t) {
    case StepType::Init: return "init";
    case StepType::Newton: return "newton";
    case StepType::Prox: return "prox";
  }
  return "?";
}

StepType parse_step_type(std::string_view s) {
  if (s == "init") return StepType::Init;
  if (s == "newton") return StepType::Newton;
  if (s == "prox") return StepType::Prox;
  throw std::invalid_argument("unknown step type '" + std::string(s) + "'");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::NonFinite: return "non_finite";
  }
  return "?";
}

std::string trace_csv_header() {
  return "k,step_type,psi,full_res,stoch_res,theta,lambda,grad_size,hess_size,epochs,wall_ms";
}

namespace {

void append_double(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

double parse_field(const std::string& s) {
  if (s == "nan") return kNotEvaluated;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

}  // namespace

std::string to_csv(const Trace& trace, const CsvOptions& opts) {
  std::string out = trace_csv_header();
  out += '\n';
  for (const auto& r : trace.records) {
    out += std::to_string(r.k);
    out += ',';
    out += to_string(r.step);
    for (double v : {r.psi, r.full_res, r.stoch_res, r.theta, r.lambda}) {
      out += ',';
      append_double(out, v);
    }
    out += ',' + std::to_string(r.grad_size) + ',' + std::to_string(r.hess_size) + ',';
    append_double(out, r.epochs);
    out += ',';
    append_double(out, opts.wall_time ? r.wall_ms : 0.0);
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != trace_csv_header()) throw std::invalid_argument("trace CSV: unexpected header");
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw std::invalid_argument("trace CSV: expected 11 fields, got " + std::to_string(f.size()));
    TraceRecord r;
    r.k = std::stoll(f[0]);
    r.step = parse_step_type(f[1]);
    r.psi = parse_field(f[2]);
    r.full_res = parse_field(f[3]);
    r.stoch_res = parse_field(f[4]);
    r.theta = parse_field(f[5]);
    r.lambda = parse_field(f[6]);
    r.grad_size = std::stoll(f[7]);
    r.hess_size = std::stoll(f[8]);
    r.epochs = parse_field(f[9]);
    r.wall_ms = parse_field(f[10]);
    records.push_back(r);
  }
  return records;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path, const CsvOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(trace, opts);
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv(buf.str());
}

}  // namespace s4n
