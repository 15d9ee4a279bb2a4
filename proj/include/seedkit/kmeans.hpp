#pragma once

#include <vector>

#include "seedkit/dataset.hpp"

namespace seedkit {

/// Ordered seed indices into a PointSet; position is the selection order,
/// which matters for zig-zag reselection.
using SeedSet = std::vector<Index>;

struct LloydResult {
  Matrix centers;           // K x d
  std::vector<int> labels;  // nearest-center assignment under final centers
  double sse = 0.0;
  int iterations = 0;
};

/// Nearest-center labels under squared Euclidean distance; ties go to the
/// smaller center index.
std::vector<int> assign(const PointSet& ps, const Matrix& centers);

/// Per-cluster centers of mass. An empty cluster is repaired by promoting the
/// point farthest from its current center (each point promoted at most once).
Matrix centroids(const PointSet& ps, const std::vector<int>& labels, int K);

/// SSE: sum over points of squared distance to the nearest center.
/// With seeds as centers this is the seeding objective phi_S.
double sse(const PointSet& ps, const Matrix& centers);

/// Lookahead objective phi_COM: assign points to their nearest seed, replace
/// each seed by the center of mass of its cluster, and evaluate the SSE
/// against those centroids (assign -> centroids -> sse).
double sse_com(const PointSet& ps, const SeedSet& seeds);

/// Lloyd iterations from the given centers. Stops when the Frobenius norm of
/// the center update drops below tol, or at max_iter. If sse_trace is given
/// it receives the SSE after every centroid update.
LloydResult lloyd(const PointSet& ps, Matrix init, double tol = 1e-4,
                  int max_iter = 50, std::vector<double>* sse_trace = nullptr);

/// Rows of ps selected by seed indices, as a K x d center matrix.
Matrix gather_rows(const PointSet& ps, const SeedSet& seeds);

}  // namespace seedkit
