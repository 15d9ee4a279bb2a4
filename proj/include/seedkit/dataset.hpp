#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace seedkit {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Immutable point cloud: one row per point. Row order is stable across all
/// operations; indices are identities.
struct PointSet {
  Matrix points;  // n x d

  PointSet() = default;
  explicit PointSet(Matrix pts) : points(std::move(pts)) {}

  Index n() const { return points.rows(); }
  Index d() const { return points.cols(); }
};

struct CsvOptions {
  char delimiter = ',';
  bool header = false;
  std::vector<Index> drop_columns;  // 0-based indices in the raw file
};

/// Parse a numeric CSV into a PointSet. Rejects ragged rows, non-numeric
/// tokens and non-finite values, naming the offending row/column.
PointSet load_csv(const std::string& path, const CsvOptions& options = {});

/// Same parser over an in-memory buffer (the file loader delegates here).
PointSet parse_csv(const std::string& text, const CsvOptions& options = {});

/// Serialize as comma-delimited rows, full double precision (round-trips
/// through load_csv).
std::string to_csv(const PointSet& ps);

/// Affinely map every coordinate column onto [0,1]; constant columns map to 0.
PointSet minmax_normalize(const PointSet& ps);

/// Indices of the L nearest points to point i (Euclidean, excluding i);
/// ties broken toward the smaller index.
std::vector<Index> knn(const PointSet& ps, Index i, Index L);

}  // namespace seedkit
