#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "s4n/dataset.hpp"
#include "test_support.hpp"

using namespace s4n;

namespace {

double entry(const SparseDataset& ds, Index i, Index j) { return ds.rows().coeff(i, j); }

SparseDataset from_dense(const Eigen::MatrixXd& A, const Vector& labels) {
  SparseRows rows = A.sparseView();
  rows.makeCompressed();
  return SparseDataset(std::move(rows), labels);
}

}  // namespace

TEST(LoadLibsvm, ParsesRowsAndShiftsIndices) {
  const SparseDataset ds = parse_libsvm("1 1:0.5 3:1.0\n-1 2:2\n");
  ASSERT_EQ(ds.n_points(), 2);
  EXPECT_EQ(ds.n_features(), 3);
  EXPECT_EQ(ds.labels()(0), 1.0);
  EXPECT_EQ(ds.labels()(1), -1.0);
  EXPECT_DOUBLE_EQ(entry(ds, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(entry(ds, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(entry(ds, 1, 1), 2.0);
  EXPECT_EQ(ds.nnz(), 3);
}

TEST(LoadLibsvm, CountsLines) {
  EXPECT_EQ(parse_libsvm("1 1:1\n-1 1:2\n1 2:3\n").n_points(), 3);
}

TEST(LoadLibsvm, MapsSmallerClassToMinusOne) {
  const SparseDataset ds = parse_libsvm("2 1:1\n1 1:2\n2 2:3\n");
  EXPECT_EQ(ds.labels()(0), 1.0);
  EXPECT_EQ(ds.labels()(1), -1.0);
  EXPECT_EQ(ds.labels()(2), 1.0);
}

TEST(LoadLibsvm, ZeroLabelIsNegative) {
  const SparseDataset ds = parse_libsvm("0 1:1\n1 1:2\n");
  EXPECT_EQ(ds.labels()(0), -1.0);
  EXPECT_EQ(ds.labels()(1), 1.0);
}

TEST(LoadLibsvm, MalformedLineReportsLineNumber) {
  try {
    parse_libsvm("1 1:1\n-1 2:x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_libsvm("1 0:1\n"), ParseError);
  EXPECT_THROW(parse_libsvm("1 3\n"), ParseError);
}

TEST(LoadLibsvm, RejectsMoreThanTwoClasses) { EXPECT_THROW(parse_libsvm("1 1:1\n2 1:1\n3 1:1\n"), std::runtime_error); }

TEST(LoadLibsvm, CapsPointsAndFeatures) {
  LoadOptions opts;
  opts.max_points = 2;
  opts.max_features = 2;
  const SparseDataset ds = parse_libsvm("1 1:1 3:4\n-1 2:2\n1 1:3\n", opts);
  EXPECT_EQ(ds.n_points(), 2);
  EXPECT_EQ(ds.n_features(), 2);
  EXPECT_EQ(ds.nnz(), 2);
}

TEST(LoadLibsvm, FileRoundTrip) {
  const auto ds = *fixtures::small_dataset(30, 8, 0.4, 3);
  const auto path = std::filesystem::temp_directory_path() / "s4n_roundtrip.svm";
  save_libsvm(ds, path);
  const SparseDataset back = load_libsvm(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.n_points(), ds.n_points());
  EXPECT_EQ(back.labels(), ds.labels());
  EXPECT_LE((Eigen::MatrixXd(back.rows()) - Eigen::MatrixXd(ds.rows())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LoadLibsvm, MissingFileThrows) { EXPECT_THROW(load_libsvm("/nonexistent/file.svm"), std::runtime_error); }

TEST(ScaleFeatures, DividesByColumnMaxWhenZerosPresent) {
  Eigen::MatrixXd A(3, 1);
  A << 2, 4, 0;
  const SparseDataset s = scale_features(from_dense(A, Vector::Ones(3)));
  EXPECT_DOUBLE_EQ(entry(s, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(entry(s, 1, 0), 1.0);
  EXPECT_EQ(s.nnz(), 2);
}

TEST(ScaleFeatures, ConstantColumnWithZerosMapsToOne) {
  Eigen::MatrixXd A(3, 1);
  A << 3, 3, 0;
  const SparseDataset s = scale_features(from_dense(A, Vector::Ones(3)));
  EXPECT_DOUBLE_EQ(entry(s, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(entry(s, 1, 0), 1.0);
}

TEST(ScaleFeatures, EmptyColumnUnchanged) {
  Eigen::MatrixXd A(2, 2);
  A << 1, 0, 2, 0;
  const SparseDataset s = scale_features(from_dense(A, Vector::Ones(2)));
  EXPECT_EQ(s.n_features(), 2);
  EXPECT_EQ(Eigen::MatrixXd(s.rows()).col(1).squaredNorm(), 0.0);
}

TEST(ScaleFeatures, ValuesInUnitIntervalAndPatternPreserved) {
  SynthOptions so;
  so.n_points = 200;
  so.n_features = 30;
  so.density = 0.3;
  const SparseDataset raw = synth_binary(so);
  for (auto mode : {ScalingMode::PerFeature, ScalingMode::Global}) {
    const SparseDataset s = scale_features(raw, mode);
    EXPECT_EQ(s.nnz(), raw.nnz());
    for (Index k = 0; k < s.rows().outerSize(); ++k) {
      for (SparseRows::InnerIterator it(s.rows(), k); it; ++it) {
        EXPECT_GE(it.value(), 0.0);
        EXPECT_LE(it.value(), 1.0);
      }
    }
  }
}

TEST(SynthBinary, Deterministic) {
  SynthOptions so;
  so.seed = 7;
  const SparseDataset a = synth_binary(so);
  const SparseDataset b = synth_binary(so);
  EXPECT_EQ(a.content_hash(), b.content_hash());
  EXPECT_EQ(a.labels(), b.labels());
  so.seed = 8;
  EXPECT_NE(synth_binary(so).content_hash(), a.content_hash());
}

TEST(SynthBinary, NoiselessDataSeparableUpToMedianShift) {
  SynthOptions so;
  so.n_points = 301;
  so.n_features = 20;
  so.noise = 0.0;
  const SparseDataset ds = synth_binary(so);
  const Vector w = synth_ground_truth(so);
  const Vector score = ds.rows() * w;
  std::vector<double> sorted(score.data(), score.data() + score.size());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  for (Index i = 0; i < ds.n_points(); ++i) EXPECT_GE(ds.labels()(i) * (score(i) - median), -1e-12) << i;
}

TEST(SynthBinary, MeanRowDensityWithinThreeSigma) {
  SynthOptions so;
  so.n_points = 100;
  so.n_features = 200;
  so.density = 0.1;
  const SparseDataset ds = synth_binary(so);
  const double trials = static_cast<double>(so.n_points * so.n_features);
  const double mean_nnz = static_cast<double>(ds.nnz()) / static_cast<double>(so.n_points);
  const double sigma_total = std::sqrt(trials * so.density * (1.0 - so.density));
  const double sigma_mean = sigma_total / static_cast<double>(so.n_points);
  EXPECT_NEAR(mean_nnz, so.density * static_cast<double>(so.n_features), 3.0 * sigma_mean);
}

TEST(SynthBinary, InvariantsHold) {
  const auto ds = fixtures::small_dataset(50, 10, 0.5, 1);
  EXPECT_EQ(ds->labels().size(), ds->n_points());
  for (Index i = 0; i < ds->n_points(); ++i) EXPECT_TRUE(ds->labels()(i) == 1.0 || ds->labels()(i) == -1.0);
  EXPECT_THROW(synth_binary(SynthOptions{.n_points = 0}), std::invalid_argument);
}

TEST(SparseDatasetCtor, RejectsBadLabels) {
  SparseRows rows(2, 2);
  Vector labels(2);
  labels << 1, 0.5;
  EXPECT_THROW(SparseDataset(rows, labels), std::invalid_argument);
  EXPECT_THROW(SparseDataset(rows, Vector::Ones(3)), std::invalid_argument);
}
