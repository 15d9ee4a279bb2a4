#pragma once

#include <span>
#include <vector>

#include "seedkit/dataset.hpp"

namespace seedkit {

struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Gauss {
  Vector mean;
  Matrix cov;  // d x d, symmetric
};

/// Weighted mixture of multivariate Gaussians. Weights are non-negative and
/// sum to one.
struct Mixture {
  Vector weights;
  std::vector<Gauss> components;

  int K() const { return int(components.size()); }
  Index d() const { return components.empty() ? 0 : components.front().mean.size(); }
};

/// log N(x | mean, cov) via Cholesky; no explicit inverse or determinant.
double log_pdf(const Gauss& g, const Vector& x);

/// log sum_i exp(v_i) with the max-shift trick; all-(-inf) input gives -inf.
double logsumexp(std::span<const double> v);
inline double logsumexp(const std::vector<double>& v) { return logsumexp(std::span<const double>(v)); }

double mixture_loglik(const Mixture& m, const PointSet& ps);

/// Log-domain responsibilities, n x K; every row logsumexp's to zero.
Matrix e_step(const Mixture& m, const PointSet& ps);

/// Maximum-likelihood re-estimation from log responsibilities. Throws when a
/// component's responsibility mass vanishes (below 1e-300).
Mixture m_step(const PointSet& ps, const Matrix& log_resp);

struct EmResult {
  Mixture mixture;
  double loglik = 0.0;
  int iterations = 0;
};

/// EM loop with relative log-likelihood stop rule |l_t - l_{t-1}|/|l_{t-1}|
/// < tol and iteration cap. Covariances get a 1e-9*trace/d diagonal jitter at
/// factorization time; collapsed components are restarted at the worst-fit
/// point. An optional trace receives the log-likelihood after each iteration.
EmResult em(const PointSet& ps, Mixture init, double tol = 1e-4, int max_iter = 100,
            std::vector<double>* ll_trace = nullptr);

enum class CovMode { Aniso, Spherical };

/// Convert means into a mixture: partition points by nearest mean, then per
/// cluster take the COM, the cluster share as weight, and the scatter as
/// covariance, falling back anisotropic -> spherical -> identity until the
/// estimate is positive definite. Empty clusters are dropped and the weights
/// renormalized.
Mixture means_to_gmm(const PointSet& ps, const Matrix& means, CovMode mode);

/// JSON serialization: weights, means, row-major covariances.
std::string mixture_to_json(const Mixture& m);
Mixture mixture_from_json(const std::string& text);

}  // namespace seedkit
