#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "s4n/types.hpp"

namespace s4n {

enum class StepType { Init, Newton, Prox };

std::string_view to_string(StepType t);
StepType parse_step_type(std::string_view s);

inline constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

/// One row per iteration. `full_res` is NaN when the full residual was not
/// evaluated at that iteration.
struct TraceRecord {
  Index k = 0;
  StepType step = StepType::Init;
  double psi = 0.0;
  double full_res = kNotEvaluated;
  double stoch_res = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
  Index grad_size = 0;
  Index hess_size = 0;
  double epochs = 0.0;
  double wall_ms = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

enum class RunStatus { Converged, MaxIterations, NonFinite };

std::string_view to_string(RunStatus s);

struct TraceSummary {
  RunStatus status = RunStatus::MaxIterations;
  Index iterations = 0;
  double final_psi = 0.0;
  double final_full_res = kNotEvaluated;
  double epochs = 0.0;
  double wall_ms = 0.0;
  Index newton_accepted = 0;
  Index prox_fallbacks = 0;
  std::string message;
};

struct Trace {
  std::vector<TraceRecord> records;
  TraceSummary summary;
  /// Final iterate.
  Vector x;
};

struct CsvOptions {
  /// When false the wall_ms column is written as 0 so that reruns compare
  /// byte-for-byte.
  bool wall_time = true;
};

/// Header: k,step_type,psi,full_res,stoch_res,theta,lambda,grad_size,hess_size,epochs,wall_ms
std::string trace_csv_header();
std::string to_csv(const Trace& trace, const CsvOptions& opts = {});
std::vector<TraceRecord> parse_trace_csv(const std::string& text);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path, const CsvOptions& opts = {});
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

}  // namespace s4n
