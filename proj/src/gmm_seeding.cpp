#include "seedkit/gmm_seeding.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pass_engine.hpp"
#include "seedkit/numeric.hpp"

namespace seedkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
}  // namespace

std::vector<double> adaptive_weights(const PointSet& ps, const Mixture& current,
                                     double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("adaptive_weights: alpha must be in (0,1]");
  const Index n = ps.n();
  const int K = current.K();

  std::vector<Eigen::LLT<Eigen::MatrixXd>> llts;
  llts.reserve(std::size_t(K));
  for (const auto& g : current.components) {
    llts.emplace_back(g.cov);
    if (llts.back().info() != Eigen::Success)
      throw NotPositiveDefiniteError("adaptive_weights: component covariance not PD");
  }

  std::vector<double> mahal(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    double best = kInf;
    for (int k = 0; k < K; ++k) {
      Vector diff = ps.points.row(j).transpose() - current.components[std::size_t(k)].mean;
      llts[std::size_t(k)].matrixL().solveInPlace(diff);
      best = std::min(best, diff.squaredNorm());
    }
    mahal[std::size_t(j)] = best;
    total += best;
  }

  std::vector<double> w(static_cast<std::size_t>(n));
  const double floor = (1.0 - alpha) / double(n);
  for (Index j = 0; j < n; ++j) {
    const double m = total > 0.0 ? alpha * mahal[std::size_t(j)] / total : alpha / double(n);
    w[std::size_t(j)] = m + floor;
  }
  return w;
}

Index rank_by_loglik(const PointSet& ps, const SeedSet& base,
                     const std::vector<Index>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("rank_by_loglik: no candidates");
  Matrix means(Index(base.size()) + 1, ps.d());
  for (std::size_t i = 0; i < base.size(); ++i) means.row(Index(i)) = ps.points.row(base[i]);

  double best = -kInf;
  Index winner = candidates.front();
  for (Index c : candidates) {
    means.row(means.rows() - 1) = ps.points.row(c);
    const Mixture tmp = means_to_gmm(ps, means, CovMode::Spherical);
    const double ll = mixture_loglik(tmp, ps);
    if (ll > best) {
      best = ll;
      winner = c;
    }
  }
  return winner;
}

LocalGaussSet local_gaussians(const PointSet& ps, int K) {
  const Index n = ps.n();
  const Index d = ps.d();
  if (K < 1 || Index(K) > n) throw std::invalid_argument("local_gaussians: K out of range");
  const Index L = std::clamp<Index>(n / K, 1, n - 1);

  // Kernel widths: mean distance to the L nearest neighbors.
  Vector width(n);
  for (Index j = 0; j < n; ++j) {
    const auto nb = knn(ps, j, L);
    double s = 0.0;
    for (Index q : nb) s += (ps.points.row(q) - ps.points.row(j)).norm();
    width[j] = std::max(s / double(L), 1e-12);  // duplicates would give zero width
  }

  // Row normalizers of the kernel responsibilities, log domain.
  const auto log_kernel = [&](Index i, Index j, double dist2) {
    (void)i;
    const double w = width[j];
    return -double(d) * std::log(w) - 0.5 * double(d) * kLog2Pi - 0.5 * dist2 / (w * w);
  };

  Vector row_norm(n);
  {
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const double dist2 = (ps.points.row(i) - ps.points.row(j)).squaredNorm();
        row[std::size_t(j)] = log_kernel(i, j, dist2);
      }
      row_norm[i] = logsumexp(row);
    }
  }

  LocalGaussSet out(static_cast<std::size_t>(n));
  std::vector<double> col(static_cast<std::size_t>(n));  // responsibilities toward point j
  std::vector<double> dist2(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      dist2[std::size_t(i)] = (ps.points.row(i) - ps.points.row(j)).squaredNorm();
      col[std::size_t(i)] = std::exp(log_kernel(i, j, dist2[std::size_t(i)]) - row_norm[i]);
    }
    double mass = 0.0;
    Vector mu = Vector::Zero(d);
    for (Index i = 0; i < n; ++i) {
      mass += col[std::size_t(i)];
      mu += col[std::size_t(i)] * ps.points.row(i).transpose();
    }
    mu /= mass;
    Matrix cov = Matrix::Zero(d, d);
    for (Index i = 0; i < n; ++i) {
      const Vector diff = ps.points.row(i).transpose() - mu;
      cov += col[std::size_t(i)] * (diff * diff.transpose());
    }
    cov /= mass;
    cov = (cov + cov.transpose()) / 2.0;

    // means_to_gmm fallback chain: anisotropic -> spherical -> identity.
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      double s = 0.0;
      for (Index i = 0; i < n; ++i)
        s += col[std::size_t(i)] * (ps.points.row(i).transpose() - mu).squaredNorm();
      const double var = s / (double(d) * mass);
      cov = Matrix::Identity(d, d) * var;
      if (Eigen::LLT<Eigen::MatrixXd>(cov).info() != Eigen::Success)
        cov = Matrix::Identity(d, d);
    }
    out[std::size_t(j)] = LocalGauss{Gauss{std::move(mu), std::move(cov)}, j};
  }
  return out;
}

double gauss_distance(const Gauss& g1, const Gauss& g2) {
  const Matrix avg = (g1.cov + g2.cov) / 2.0;
  Eigen::LLT<Eigen::MatrixXd> llt_avg(avg);
  Eigen::LLT<Eigen::MatrixXd> llt1(g1.cov);
  Eigen::LLT<Eigen::MatrixXd> llt2(g2.cov);
  if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success ||
      llt_avg.info() != Eigen::Success)
    throw NotPositiveDefiniteError("gauss_distance: covariance not PD");

  const Vector diff = g1.mean - g2.mean;
  const double mean_term = std::sqrt(diff.dot(llt_avg.solve(diff)));

  // Generalized eigenvalues of (cov1, cov2) via Cholesky reduction.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gep(
      g1.cov, g2.cov, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const Eigen::VectorXd lambda = gep.eigenvalues();
  double cov_term = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double l = std::log(lambda[i]);
    cov_term += l * l;
  }
  return mean_term + std::sqrt(cov_term);
}

namespace {

// Min squared gauss-distance to any selected Gaussian; the D^2 state for GGD.
struct GaussDistCache {
  const LocalGaussSet* gset = nullptr;
  Vector d2;

  void init(const LocalGaussSet& gs) {
    gset = &gs;
    d2 = Vector::Constant(Index(gs.size()), kInf);
  }
  void add_seed(Index seed_point) {
    const auto& gs = *gset;
    for (std::size_t j = 0; j < gs.size(); ++j) {
      const double dist = gauss_distance(gs[j].g, gs[std::size_t(seed_point)].g);
      d2[Index(j)] = std::min(d2[Index(j)], dist * dist);
    }
  }
  void rebuild(const SeedSet& seeds) {
    d2 = Vector::Constant(Index(gset->size()), kInf);
    for (Index s : seeds) add_seed(s);
  }
  double phi_with_candidate(Index candidate) const {
    const auto& gs = *gset;
    double total = 0.0;
    for (std::size_t j = 0; j < gs.size(); ++j) {
      const double dist = gauss_distance(gs[j].g, gs[std::size_t(candidate)].g);
      total += std::min(d2[Index(j)], dist * dist);
    }
    return total;
  }
};

struct GmmHooks {
  const PointSet& ps;
  GmmPassSpec spec;
  NearestSeedCache euclid;
  SeedSet synced;
  bool dirty = true;
  GaussDistCache gdist;
  const LocalGaussSet* gset = nullptr;

  GmmHooks(const PointSet& p, const GmmPassSpec& s, const LocalGaussSet* gs)
      : ps(p), spec(s), gset(gs) {
    if (spec.sampling == GmmSampling::GaussDist) gdist.init(*gset);
  }

  void sync(const SeedSet& seeds) {
    if (!dirty && seeds == synced) return;
    euclid.rebuild(ps, seeds);
    if (spec.sampling == GmmSampling::GaussDist) gdist.rebuild(seeds);
    synced = seeds;
    dirty = false;
  }

  std::vector<double> weights(const SeedSet& seeds) {
    const Index n = ps.n();
    if (seeds.empty()) {
      euclid.init_empty(ps);
      if (spec.sampling == GmmSampling::GaussDist) gdist.rebuild({});
      synced.clear();
      dirty = false;
      return std::vector<double>(std::size_t(n), 1.0);
    }
    sync(seeds);
    switch (spec.sampling) {
      case GmmSampling::Euclidean:
        return std::vector<double>(euclid.d2.data(), euclid.d2.data() + n);
      case GmmSampling::Adaptive: {
        // The mixture is rebuilt from the current seeds once per position.
        const Mixture cur = means_to_gmm(ps, gather_rows(ps, seeds), CovMode::Spherical);
        return adaptive_weights(ps, cur, spec.alpha);
      }
      case GmmSampling::GaussDist:
        return std::vector<double>(gdist.d2.data(), gdist.d2.data() + n);
    }
    return {};
  }

  Index rank(const SeedSet& base, const std::vector<Index>& candidates) {
    sync(base);
    switch (spec.ranking) {
      case GmmRank::LogLik:
        return rank_by_loglik(ps, base, candidates);
      case GmmRank::Com: {
        double best = kInf;
        Index winner = candidates.front();
        for (Index c : candidates) {
          SeedSet with = base;
          with.push_back(c);
          const double v = sse_com(ps, with);
          if (v < best) {
            best = v;
            winner = c;
          }
        }
        return winner;
      }
      case GmmRank::Data: {
        double best = kInf;
        Index winner = candidates.front();
        for (Index c : candidates) {
          double v;
          if (spec.sampling == GmmSampling::GaussDist) {
            v = gdist.phi_with_candidate(c);
          } else {
            const auto crow = ps.points.row(c);
            v = 0.0;
            for (Index j = 0; j < ps.n(); ++j)
              v += std::min(euclid.d2[j], (ps.points.row(j) - crow).squaredNorm());
          }
          if (v < best) {
            best = v;
            winner = c;
          }
        }
        return winner;
      }
      case GmmRank::NA:
        break;
    }
    throw std::invalid_argument("gmm rank: metric NA");
  }

  void changed(const SeedSet& seeds, bool appended) {
    if (appended && !dirty && seeds.size() == synced.size() + 1 &&
        std::equal(synced.begin(), synced.end(), seeds.begin())) {
      euclid.add_seed(ps, seeds.back(), Index(seeds.size()) - 1);
      if (spec.sampling == GmmSampling::GaussDist) gdist.add_seed(seeds.back());
      synced = seeds;
    } else {
      dirty = true;
    }
  }

  detail::PassHooks as_pass_hooks() {
    return detail::PassHooks{
        [this](const SeedSet& s) { return weights(s); },
        [this](const SeedSet& b, const std::vector<Index>& c) { return rank(b, c); },
        [this](const SeedSet& s, bool appended) { changed(s, appended); },
    };
  }
};

void validate_gmm_pass(const GmmPassSpec& spec, bool first) {
  const bool one = spec.pool == PoolPolicy::One;
  if (one != (spec.ranking == GmmRank::NA))
    throw std::invalid_argument("gmm seeding pass: pool=One iff ranking=NA");
  if (first && spec.direction != Direction::Zig)
    throw std::invalid_argument("gmm seeding plan: the first pass must run in zig direction");
  if (!(spec.alpha > 0.0) || spec.alpha > 1.0)
    throw std::invalid_argument("gmm seeding pass: alpha must be in (0,1]");
}

}  // namespace

SeedSet select_seeds_gauss_dist(const PointSet& ps, const LocalGaussSet& gset,
                                int K, int pool_count, bool greedy, RngStream& rng) {
  if (Index(gset.size()) != ps.n())
    throw std::invalid_argument("select_seeds_gauss_dist: gaussian set size mismatch");
  GmmPassSpec spec;
  spec.sampling = GmmSampling::GaussDist;
  spec.pool = greedy ? PoolPolicy::Greedy : PoolPolicy::One;
  spec.ranking = greedy ? GmmRank::Data : GmmRank::NA;
  GmmHooks hooks(ps, spec, &gset);
  auto ph = hooks.as_pass_hooks();
  SeedSet selected = detail::construction_pass(ps, K, pool_count, greedy, ph, rng);
  for (Index& s : selected) s = gset[std::size_t(s)].source;
  return selected;
}

GmmSeedResult seed_gmm(const PointSet& ps, int K, const GmmSeedingPlan& plan,
                       RngStream& rng) {
  if (plan.passes.empty()) throw std::invalid_argument("seed_gmm: empty plan");
  if (K < 1 || Index(K) > ps.n()) throw std::invalid_argument("seed_gmm: K out of range");

  // GGD precomputes the full local Gaussian set once per run.
  LocalGaussSet gset;
  const bool needs_gset =
      std::any_of(plan.passes.begin(), plan.passes.end(),
                  [](const GmmPassSpec& p) { return p.sampling == GmmSampling::GaussDist; });
  if (needs_gset) gset = local_gaussians(ps, K);

  SeedSet seeds;
  for (std::size_t p = 0; p < plan.passes.size(); ++p) {
    const auto& spec = plan.passes[p];
    validate_gmm_pass(spec, p == 0);
    const int pool = pool_size(plan.pool_rule, plan.fixed_pool, K) * spec.pool_scale;
    const bool greedy = spec.pool == PoolPolicy::Greedy;
    GmmHooks hooks(ps, spec, needs_gset ? &gset : nullptr);
    auto ph = hooks.as_pass_hooks();
    if (p == 0) {
      seeds = detail::construction_pass(ps, K, pool, greedy, ph, rng);
    } else {
      seeds = detail::reselection_pass(ps, std::move(seeds), pool, greedy,
                                       spec.direction == Direction::Zag, ph, rng);
    }
    if (spec.sampling == GmmSampling::GaussDist) {
      for (Index& s : seeds) s = gset[std::size_t(s)].source;
    }
  }

  GmmSeedResult res;
  res.init = means_to_gmm(ps, gather_rows(ps, seeds), CovMode::Spherical);
  res.seeds = std::move(seeds);
  return res;
}

GmmSeedingPlan gmm_plan_preset(std::string_view name, PoolRule rule, int fixed_pool) {
  GmmSeedingPlan plan;
  plan.pool_rule = rule;
  plan.fixed_pool = fixed_pool;

  const auto pass = [](GmmSampling s, PoolPolicy p, GmmRank r, Direction dir,
                       int scale = 1) {
    GmmPassSpec ps;
    ps.sampling = s;
    ps.pool = p;
    ps.ranking = r;
    ps.direction = dir;
    ps.pool_scale = scale;
    return ps;
  };
  using S = GmmSampling;
  using R = GmmRank;
  const auto zig = Direction::Zig;
  const auto zag = Direction::Zag;

  if (name == "EON") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::One, R::NA, zig)};
  } else if (name == "EGD") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::Greedy, R::Data, zig)};
  } else if (name == "EGD2") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::Greedy, R::Data, zig, 2)};
  } else if (name == "EGD-EGC") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::Greedy, R::Data, zig),
                   pass(S::Euclidean, PoolPolicy::Greedy, R::Com, zag)};
  } else if (name == "EGD-EGL") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::Greedy, R::Data, zig),
                   pass(S::Euclidean, PoolPolicy::Greedy, R::LogLik, zag)};
  } else if (name == "AGL") {
    plan.passes = {pass(S::Adaptive, PoolPolicy::Greedy, R::LogLik, zig)};
  } else if (name == "EGD-AGL") {
    plan.passes = {pass(S::Euclidean, PoolPolicy::Greedy, R::Data, zig),
                   pass(S::Adaptive, PoolPolicy::Greedy, R::LogLik, zag)};
  } else if (name == "GGD") {
    plan.passes = {pass(S::GaussDist, PoolPolicy::Greedy, R::Data, zig)};
  } else {
    throw std::invalid_argument("unknown GMM seeding preset: " + std::string(name));
  }
  return plan;
}

const std::vector<std::string>& gmm_method_names() {
  static const std::vector<std::string> names = {"EON",     "EGD", "EGD2",    "EGD-EGC",
                                                 "EGD-EGL", "AGL", "EGD-AGL", "GGD"};
  return names;
}

}  // namespace seedkit
