#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCore>

#include "s4n/types.hpp"

namespace s4n {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

/// Row-sparse design matrix with binary labels in {-1, +1}.
///
/// Row i holds the feature vector a_i; labels(i) holds b_i. Feature indices
/// are 0-based. The object is immutable after construction and can be shared
/// read-only across threads.
class SparseDataset {
 public:
  SparseDataset() = default;
  SparseDataset(SparseRows rows, Vector labels);

  [[nodiscard]] const SparseRows& rows() const noexcept { return rows_; }
  [[nodiscard]] const Vector& labels() const noexcept { return labels_; }
  [[nodiscard]] Index n_points() const noexcept { return rows_.rows(); }
  [[nodiscard]] Index n_features() const noexcept { return rows_.cols(); }
  [[nodiscard]] Index nnz() const noexcept { return rows_.nonZeros(); }

  /// Stable 64-bit FNV-1a hash over shape, sparsity pattern, values and labels.
  [[nodiscard]] std::uint64_t content_hash() const;

 private:
  SparseRows rows_;
  Vector labels_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct LoadOptions {
  /// Keep only the first `max_points` data lines.
  std::optional<Index> max_points;
  /// Drop features with 0-based index >= max_features and fix n_features to it.
  std::optional<Index> max_features;
  /// Override n_features (must exceed every stored index after capping).
  std::optional<Index> n_features;
};

SparseDataset load_libsvm(const std::filesystem::path& path, const LoadOptions& opts = {});
SparseDataset parse_libsvm(const std::string& text, const LoadOptions& opts = {});
std::string to_libsvm(const SparseDataset& ds);
void save_libsvm(const SparseDataset& ds, const std::filesystem::path& path);

enum class ScalingMode { PerFeature, Global };

/// Min-max scaling of stored entries to [0, 1]. Implicit zeros count as
/// observed values whenever a column (or the matrix, in global mode) has an
/// absent entry, so the sparsity pattern is preserved.
SparseDataset scale_features(const SparseDataset& ds, ScalingMode mode = ScalingMode::PerFeature);

struct SynthOptions {
  Index n_points = 1000;
  Index n_features = 50;
  double density = 0.2;
  std::uint64_t seed = 1;
  double noise = 0.0;
  /// Fraction of features carrying a nonzero ground-truth weight.
  double support = 0.5;
};

/// Synthetic binary classification data with a sparse planted separator.
SparseDataset synth_binary(const SynthOptions& opts);

/// Ground-truth weights used by synth_binary for the same options.
Vector synth_ground_truth(const SynthOptions& opts);

}  // namespace s4n
