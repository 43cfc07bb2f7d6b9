#include "s4n/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace s4n {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

template <class T>
void fnv_mix(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
}

struct RawRow {
  double label;
  std::vector<std::pair<Index, double>> entries;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view tok, std::size_t line, const char* what) {
  // std::from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  const auto* begin = tok.data();
  const auto* end = tok.data() + tok.size();
  if (!tok.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  }
  return v;
}

RawRow parse_line(std::string_view line, std::size_t lineno) {
  RawRow row{};
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string_view {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const auto start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    return line.substr(start, pos - start);
  };

  row.label = parse_double(next_token(), lineno, "label");
  Index prev = -1;
  for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
      throw ParseError(lineno, "expected <index>:<value>, got '" + std::string(tok) + "'");
    }
    long long idx = 0;
    auto idx_tok = tok.substr(0, colon);
    auto [ptr, ec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
    if (ec != std::errc() || ptr != idx_tok.data() + idx_tok.size() || idx < 1) {
      throw ParseError(lineno, "invalid feature index '" + std::string(idx_tok) + "' (indices are 1-based)");
    }
    const Index zero_based = static_cast<Index>(idx - 1);
    if (zero_based <= prev) {
      throw ParseError(lineno, "feature indices must be strictly increasing");
    }
    prev = zero_based;
    row.entries.emplace_back(zero_based, parse_double(tok.substr(colon + 1), lineno, "feature value"));
  }
  return row;
}

SparseDataset assemble(std::vector<RawRow> raw, const LoadOptions& opts) {
  std::set<double> classes;
  for (const auto& r : raw) classes.insert(r.label);
  if (classes.size() > 2) {
    throw std::runtime_error("non-binary label set: " + std::to_string(classes.size()) + " distinct labels");
  }

  // Smaller of two classes -> -1; a single class maps by sign.
  auto map_label = [&](double y) {
    if (classes.size() == 2) return y == *classes.begin() ? -1.0 : 1.0;
    return y <= 0.0 ? -1.0 : 1.0;
  };

  Index max_index = -1;
  for (auto& r : raw) {
    if (opts.max_features) {
      std::erase_if(r.entries, [&](const auto& e) { return e.first >= *opts.max_features; });
    }
    if (!r.entries.empty()) max_index = std::max(max_index, r.entries.back().first);
  }

  Index n_features = max_index + 1;
  if (opts.max_features) n_features = *opts.max_features;
  if (opts.n_features) {
    if (*opts.n_features <= max_index) {
      throw std::runtime_error("n_features override " + std::to_string(*opts.n_features) +
                               " is not larger than the maximum stored index " + std::to_string(max_index));
    }
    n_features = *opts.n_features;
  }

  const auto n_points = static_cast<Index>(raw.size());
  std::vector<Eigen::Triplet<double, Index>> triplets;
  Vector labels(n_points);
  for (Index i = 0; i < n_points; ++i) {
    labels(i) = map_label(raw[i].label);
    for (const auto& [j, v] : raw[i].entries) triplets.emplace_back(i, j, v);
  }
  SparseRows rows(n_points, std::max<Index>(n_features, 0));
  rows.setFromTriplets(triplets.begin(), triplets.end());
  rows.makeCompressed();
  return SparseDataset(std::move(rows), std::move(labels));
}

}  // namespace

SparseDataset::SparseDataset(SparseRows rows, Vector labels) : rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.rows() != labels_.size()) {
    throw std::invalid_argument("SparseDataset: row count and label count differ");
  }
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_(i) != 1.0 && labels_(i) != -1.0) {
      throw std::invalid_argument("SparseDataset: labels must be in {-1, +1}");
    }
  }
  rows_.makeCompressed();
}

std::uint64_t SparseDataset::content_hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::int64_t>(rows_.rows()));
  fnv_mix(h, static_cast<std::int64_t>(rows_.cols()));
  for (Index i = 0; i < rows_.rows(); ++i) {
    fnv_mix(h, labels_(i));
    for (SparseRows::InnerIterator it(rows_, i); it; ++it) {
      fnv_mix(h, static_cast<std::int64_t>(it.col()));
      fnv_mix(h, it.value());
    }
    fnv_mix(h, std::int64_t{-1});
  }
  return h;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

SparseDataset parse_libsvm(const std::string& text, const LoadOptions& opts) {
  std::vector<RawRow> raw;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++lineno;
    auto line = trim(std::string_view(text).substr(start, end - start));
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (!line.empty()) {
      if (opts.max_points && static_cast<Index>(raw.size()) >= *opts.max_points) break;
      raw.push_back(parse_line(line, lineno));
    }
    start = end + 1;
  }
  return assemble(std::move(raw), opts);
}

SparseDataset load_libsvm(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_libsvm(buf.str(), opts);
}

std::string to_libsvm(const SparseDataset& ds) {
  std::string out;
  char num[64];
  for (Index i = 0; i < ds.n_points(); ++i) {
    out += ds.labels()(i) > 0 ? "+1" : "-1";
    for (SparseRows::InnerIterator it(ds.rows(), i); it; ++it) {
      std::snprintf(num, sizeof(num), " %lld:%.17g", static_cast<long long>(it.col() + 1), it.value());
      out += num;
    }
    out += '\n';
  }
  return out;
}

void save_libsvm(const SparseDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_libsvm(ds);
}

SparseDataset scale_features(const SparseDataset& ds, ScalingMode mode) {
  const Index n = ds.n_features();
  const Index N = ds.n_points();
  SparseRows rows = ds.rows();

  std::vector<double> lo(n, 0.0), hi(n, 0.0);
  std::vector<Index> count(n, 0);
  std::vector<bool> seen(n, false);
  for (Index i = 0; i < N; ++i) {
    for (SparseRows::InnerIterator it(rows, i); it; ++it) {
      const auto j = it.col();
      if (!seen[j]) {
        lo[j] = hi[j] = it.value();
        seen[j] = true;
      } else {
        lo[j] = std::min(lo[j], it.value());
        hi[j] = std::max(hi[j], it.value());
      }
      ++count[j];
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (seen[j] && count[j] < N) {
      lo[j] = std::min(lo[j], 0.0);
      hi[j] = std::max(hi[j], 0.0);
    }
  }

  if (mode == ScalingMode::Global) {
    bool any = false;
    double glo = 0.0, ghi = 0.0;
    bool has_implicit_zero = false;
    for (Index j = 0; j < n; ++j) {
      if (!seen[j]) {
        has_implicit_zero = has_implicit_zero || N > 0;
        continue;
      }
      glo = any ? std::min(glo, lo[j]) : lo[j];
      ghi = any ? std::max(ghi, hi[j]) : hi[j];
      any = true;
      if (count[j] < N) has_implicit_zero = true;
    }
    if (has_implicit_zero) {
      glo = std::min(glo, 0.0);
      ghi = std::max(ghi, 0.0);
    }
    std::fill(lo.begin(), lo.end(), glo);
    std::fill(hi.begin(), hi.end(), ghi);
  }

  for (Index i = 0; i < N; ++i) {
    for (SparseRows::InnerIterator it(rows, i); it; ++it) {
      const auto j = it.col();
      const double range = hi[j] - lo[j];
      it.valueRef() = range > 0.0 ? (it.value() - lo[j]) / range : 0.0;
    }
  }
  return SparseDataset(std::move(rows), ds.labels());
}

namespace {

Vector draw_ground_truth(std::mt19937_64& rng, const SynthOptions& opts) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector w = Vector::Zero(opts.n_features);
  for (Index j = 0; j < opts.n_features; ++j) {
    const bool active = unif(rng) < opts.support;
    const double value = gauss(rng);
    if (active) w(j) = value;
  }
  return w;
}

void validate(const SynthOptions& opts) {
  if (opts.n_points < 1 || opts.n_features < 1) throw std::invalid_argument("synth_binary: empty shape");
  if (!(opts.density > 0.0 && opts.density <= 1.0)) throw std::invalid_argument("synth_binary: density must lie in (0, 1]");
  if (!(opts.noise >= 0.0 && opts.noise < 0.5)) throw std::invalid_argument("synth_binary: noise must lie in [0, 0.5)");
  if (!(opts.support > 0.0 && opts.support <= 1.0)) throw std::invalid_argument("synth_binary: support must lie in (0, 1]");
}

}  // namespace

Vector synth_ground_truth(const SynthOptions& opts) {
  validate(opts);
  std::mt19937_64 rng(opts.seed);
  return draw_ground_truth(rng, opts);
}

SparseDataset synth_binary(const SynthOptions& opts) {
  validate(opts);
  std::mt19937_64 rng(opts.seed);
  const Vector w = draw_ground_truth(rng, opts);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<Eigen::Triplet<double, Index>> triplets;
  triplets.reserve(static_cast<std::size_t>(opts.density * opts.n_points * opts.n_features * 1.1) + 16);
  std::vector<double> score(opts.n_points, 0.0);
  for (Index i = 0; i < opts.n_points; ++i) {
    for (Index j = 0; j < opts.n_features; ++j) {
      if (unif(rng) < opts.density) {
        const double v = unif(rng);
        triplets.emplace_back(i, j, v);
        score[i] += v * w(j);
      }
    }
  }

  std::vector<double> sorted = score;
  std::sort(sorted.begin(), sorted.end());
  const auto mid = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  Vector labels(opts.n_points);
  for (Index i = 0; i < opts.n_points; ++i) {
    double b = score[i] - median >= 0.0 ? 1.0 : -1.0;
    if (unif(rng) < opts.noise) b = -b;
    labels(i) = b;
  }

  SparseRows rows(opts.n_points, opts.n_features);
  rows.setFromTriplets(triplets.begin(), triplets.end());
  rows.makeCompressed();
  return SparseDataset(std::move(rows), std::move(labels));
}

}  // namespace s4n
