#include "seedkit/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "seedkit/numeric.hpp"

namespace seedkit {

std::vector<int> assign(const PointSet& ps, const Matrix& centers) {
  if (centers.cols() != ps.d()) throw std::invalid_argument("assign: dimension mismatch");
  const Index n = ps.n();
  const Index K = centers.rows();
  std::vector<int> labels(std::size_t(n), 0);
  for (Index j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Index i = 0; i < K; ++i) {
      const double d2 = (ps.points.row(j) - centers.row(i)).squaredNorm();
      if (d2 < best) {
        best = d2;
        arg = int(i);
      }
    }
    labels[std::size_t(j)] = arg;
  }
  return labels;
}

Matrix centroids(const PointSet& ps, const std::vector<int>& labels, int K) {
  if (Index(labels.size()) != ps.n()) throw std::invalid_argument("centroids: labels/points size mismatch");
  const Index n = ps.n();
  Matrix sums = Matrix::Zero(K, ps.d());
  std::vector<Index> counts(std::size_t(K), 0);
  for (Index j = 0; j < n; ++j) {
    const int l = labels[std::size_t(j)];
    if (l < 0 || l >= K) throw std::invalid_argument("centroids: label out of range");
    sums.row(l) += ps.points.row(j);
    ++counts[std::size_t(l)];
  }
  Matrix c(K, ps.d());
  for (int i = 0; i < K; ++i) {
    if (counts[std::size_t(i)] > 0) c.row(i) = sums.row(i) / double(counts[std::size_t(i)]);
  }

  // Empty-cluster repair: promote the point farthest from its current center.
  std::vector<char> promoted(std::size_t(n), 0);
  for (int i = 0; i < K; ++i) {
    if (counts[std::size_t(i)] > 0) continue;
    Index far = -1;
    double far_d2 = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (promoted[std::size_t(j)]) continue;
      const int l = labels[std::size_t(j)];
      if (counts[std::size_t(l)] == 0) continue;  // its own center row is not set
      const double d2 = (ps.points.row(j) - c.row(l)).squaredNorm();
      if (d2 > far_d2) {
        far_d2 = d2;
        far = j;
      }
    }
    if (far >= 0) {
      c.row(i) = ps.points.row(far);
      promoted[std::size_t(far)] = 1;
    } else {
      // More empty clusters than points; fall back to the global mean.
      c.row(i) = ps.points.colwise().mean();
    }
  }
  return c;
}

double sse(const PointSet& ps, const Matrix& centers) {
  if (centers.cols() != ps.d()) throw std::invalid_argument("sse: dimension mismatch");
  const Index n = ps.n();
  const Index K = centers.rows();
  std::vector<double> mind2(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < K; ++i) {
      const double d2 = (ps.points.row(j) - centers.row(i)).squaredNorm();
      if (d2 < best) best = d2;
    }
    mind2[std::size_t(j)] = best;
  }
  return pairwise_sum(mind2);
}

Matrix gather_rows(const PointSet& ps, const SeedSet& seeds) {
  Matrix m(Index(seeds.size()), ps.d());
  for (Index i = 0; i < m.rows(); ++i) {
    const Index s = seeds[std::size_t(i)];
    if (s < 0 || s >= ps.n()) throw std::invalid_argument("gather_rows: seed index out of range");
    m.row(i) = ps.points.row(s);
  }
  return m;
}

double sse_com(const PointSet& ps, const SeedSet& seeds) {
  if (seeds.empty()) throw std::invalid_argument("sse_com: empty seed set");
  const Matrix seed_coords = gather_rows(ps, seeds);
  const auto labels = assign(ps, seed_coords);
  const Matrix coms = centroids(ps, labels, int(seeds.size()));
  return sse(ps, coms);
}

LloydResult lloyd(const PointSet& ps, Matrix init, double tol, int max_iter,
                  std::vector<double>* sse_trace) {
  if (tol <= 0) throw std::invalid_argument("lloyd: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("lloyd: max_iter must be >= 1");
  if (init.cols() != ps.d()) throw std::invalid_argument("lloyd: dimension mismatch");

  const int K = int(init.rows());
  Matrix centers = std::move(init);
  int it = 0;
  while (it < max_iter) {
    ++it;
    const auto labels = assign(ps, centers);
    Matrix next = centroids(ps, labels, K);
    const double delta = (next - centers).norm();
    centers = std::move(next);
    if (sse_trace) sse_trace->push_back(sse(ps, centers));
    if (delta < tol) break;
  }

  LloydResult res;
  res.labels = assign(ps, centers);
  res.sse = sse(ps, centers);
  res.centers = std::move(centers);
  res.iterations = it;
  return res;
}

}  // namespace seedkit
