#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "seedkit/gmm.hpp"
#include "seedkit/seeding.hpp"

namespace seedkit {

enum class GmmSampling { Euclidean, Adaptive, GaussDist };
enum class GmmRank { Data, Com, LogLik, NA };

struct GmmPassSpec {
  GmmSampling sampling = GmmSampling::Euclidean;
  PoolPolicy pool = PoolPolicy::One;
  GmmRank ranking = GmmRank::NA;
  Direction direction = Direction::Zig;
  double alpha = 0.5;  // Mahalanobis share for Adaptive sampling
  int pool_scale = 1;
};

struct GmmSeedingPlan {
  std::vector<GmmPassSpec> passes;
  PoolRule pool_rule = PoolRule::Log;
  int fixed_pool = 0;
};

/// Unnormalized sampling weights mixing an alpha share of the minimum squared
/// Mahalanobis distance to the mixture components with a (1-alpha)/n uniform
/// floor; strictly positive everywhere.
std::vector<double> adaptive_weights(const PointSet& ps, const Mixture& current,
                                     double alpha);

/// Among candidates, the one whose spherical means_to_gmm temporary model
/// maximizes the data log-likelihood; ties go to the earliest position.
Index rank_by_loglik(const PointSet& ps, const SeedSet& base,
                     const std::vector<Index>& candidates);

/// Isotropic-kernel local Gaussian estimated at one data point.
struct LocalGauss {
  Gauss g;
  Index source = -1;
};
using LocalGaussSet = std::vector<LocalGauss>;

/// One local Gaussian per point: kernel width from the mean distance to the
/// L = floor(n/K) nearest neighbors, responsibilities normalized per point in
/// log domain, then M-step moment updates with the usual PD fallback chain.
LocalGaussSet local_gaussians(const PointSet& ps, int K);

/// Distance between Gaussians: Mahalanobis mean term under the averaged
/// covariance plus the Riemannian PSD metric from the generalized eigenvalues
/// of (cov1, cov2).
double gauss_distance(const Gauss& g1, const Gauss& g2);

/// D^2 selection of K local Gaussians under gauss_distance, mapped back to
/// their source points. Greedy pools are ranked by the summed squared
/// gauss-distance to the nearest selected Gaussian.
SeedSet select_seeds_gauss_dist(const PointSet& ps, const LocalGaussSet& gset,
                                int K, int pool_count, bool greedy, RngStream& rng);

struct GmmSeedResult {
  SeedSet seeds;
  Mixture init;  // spherical means_to_gmm of the selected seeds
};

GmmSeedResult seed_gmm(const PointSet& ps, int K, const GmmSeedingPlan& plan,
                       RngStream& rng);

/// Presets: EON, EGD, EGD2, EGD-EGC, EGD-EGL, AGL, EGD-AGL, GGD.
GmmSeedingPlan gmm_plan_preset(std::string_view name, PoolRule rule = PoolRule::Log,
                               int fixed_pool = 0);

const std::vector<std::string>& gmm_method_names();

}  // namespace seedkit
