#include "seedkit/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pass_engine.hpp"
#include "seedkit/numeric.hpp"

namespace seedkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int pool_size(PoolRule rule, int fixed_pool, int K) {
  switch (rule) {
    case PoolRule::Log:
      return std::max(1, int(std::floor(std::log(double(K)))) + 2);
    case PoolRule::Sqrt:
      return std::max(1, int(std::floor(std::sqrt(double(K)))) + 2);
    case PoolRule::Linear:
      return std::max(2, K);
    case PoolRule::Fixed:
      return std::max(1, fixed_pool);
  }
  return 1;
}

void NearestSeedCache::init_empty(const PointSet& ps) {
  d2 = Vector::Constant(ps.n(), kInf);
  owner.assign(std::size_t(ps.n()), -1);
}

void NearestSeedCache::add_seed(const PointSet& ps, Index seed_point, Index position) {
  const auto seed_row = ps.points.row(seed_point);
  for (Index j = 0; j < ps.n(); ++j) {
    const double dd = (ps.points.row(j) - seed_row).squaredNorm();
    if (dd < d2[j]) {
      d2[j] = dd;
      owner[std::size_t(j)] = position;
    }
  }
}

void NearestSeedCache::rebuild(const PointSet& ps, const SeedSet& seeds) {
  init_empty(ps);
  for (std::size_t p = 0; p < seeds.size(); ++p) add_seed(ps, seeds[p], Index(p));
}

double NearestSeedCache::phi_s() const {
  return pairwise_sum(std::span<const double>(d2.data(), std::size_t(d2.size())));
}

std::vector<double> d2_weights(const PointSet& ps, const SeedSet& seeds) {
  const Index n = ps.n();
  if (seeds.empty()) return std::vector<double>(std::size_t(n), 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    double best = kInf;
    for (Index s : seeds) {
      const double dd = (ps.points.row(j) - ps.points.row(s)).squaredNorm();
      if (dd < best) best = dd;
    }
    w[std::size_t(j)] = best;
  }
  return w;
}

Index sample_d2(const std::vector<double>& weights, RngStream& rng) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0)) throw std::runtime_error("sample_d2: all weights are zero");
  const double r = rng.next_double() * sum;
  double cum = 0.0;
  Index last_positive = -1;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    cum += weights[j];
    last_positive = Index(j);
    if (r < cum) return Index(j);
  }
  return last_positive;  // guards against rounding at the top of the range
}

namespace {

// phi_S of base+candidate via the cached nearest-seed distances: O(n).
double phi_s_with_candidate(const PointSet& ps, const NearestSeedCache& cache,
                            Index candidate) {
  const auto cand_row = ps.points.row(candidate);
  double total = 0.0;
  for (Index j = 0; j < ps.n(); ++j) {
    const double dc = (ps.points.row(j) - cand_row).squaredNorm();
    total += std::min(cache.d2[j], dc);
  }
  return total;
}

// phi_COM of base+candidate, assignments derived from the cache: the
// candidate claims exactly the points strictly closer to it than to base.
double phi_com_with_candidate(const PointSet& ps, const NearestSeedCache& cache,
                              std::size_t base_size, Index candidate) {
  const int K = int(base_size) + 1;
  const auto cand_row = ps.points.row(candidate);
  std::vector<int> labels(static_cast<std::size_t>(ps.n()));
  for (Index j = 0; j < ps.n(); ++j) {
    const double dc = (ps.points.row(j) - cand_row).squaredNorm();
    labels[std::size_t(j)] = dc < cache.d2[j] ? K - 1 : int(cache.owner[std::size_t(j)]);
  }
  const Matrix coms = centroids(ps, labels, K);
  return sse(ps, coms);
}

// Stateful hook set for the Euclidean k-means passes: keeps the nearest-seed
// cache in sync with whatever base set the engine is currently working on.
struct KmeansHooks {
  const PointSet& ps;
  RankMetric metric;
  NearestSeedCache cache;
  SeedSet synced;
  bool dirty = true;

  explicit KmeansHooks(const PointSet& p, RankMetric m) : ps(p), metric(m) {}

  void sync(const SeedSet& seeds) {
    if (!dirty && seeds == synced) return;
    cache.rebuild(ps, seeds);
    synced = seeds;
    dirty = false;
  }

  std::vector<double> weights(const SeedSet& seeds) {
    if (seeds.empty()) {
      cache.init_empty(ps);
      synced.clear();
      dirty = false;
      return std::vector<double>(std::size_t(ps.n()), 1.0);
    }
    sync(seeds);
    return std::vector<double>(cache.d2.data(), cache.d2.data() + cache.d2.size());
  }

  Index rank(const SeedSet& base, const std::vector<Index>& candidates) {
    sync(base);
    double best = kInf;
    Index winner = candidates.front();
    for (Index c : candidates) {
      const double value = metric == RankMetric::Com
                               ? phi_com_with_candidate(ps, cache, base.size(), c)
                               : phi_s_with_candidate(ps, cache, c);
      if (value < best) {
        best = value;
        winner = c;
      }
    }
    return winner;
  }

  void changed(const SeedSet& seeds, bool appended) {
    if (appended && !dirty && seeds.size() == synced.size() + 1 &&
        std::equal(synced.begin(), synced.end(), seeds.begin())) {
      cache.add_seed(ps, seeds.back(), Index(seeds.size()) - 1);
      synced = seeds;
    } else {
      dirty = true;  // rebuilt lazily at the next sync
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

void validate_pass(const PassSpec& spec, bool first) {
  const bool one = spec.pool == PoolPolicy::One;
  if (one != (spec.ranking == RankMetric::NA))
    throw std::invalid_argument("seeding pass: pool=One iff ranking=NA");
  if (first && spec.direction != Direction::Zig)
    throw std::invalid_argument("seeding plan: the first pass must run in zig direction");
  if (spec.pool_scale < 1) throw std::invalid_argument("seeding pass: pool_scale must be >= 1");
}

}  // namespace

Index rank_candidates(const PointSet& ps, const SeedSet& base,
                      const std::vector<Index>& candidates, RankMetric metric) {
  if (candidates.empty()) throw std::invalid_argument("rank_candidates: no candidates");
  if (metric == RankMetric::NA) throw std::invalid_argument("rank_candidates: metric NA");
  KmeansHooks hooks(ps, metric);
  return hooks.rank(base, candidates);
}

SeedSet run_construction_pass(const PointSet& ps, const PassSpec& spec,
                              const SeedingPlan& plan, int K, RngStream& rng) {
  validate_pass(spec, true);
  if (K < 1 || Index(K) > ps.n()) throw std::invalid_argument("run_construction_pass: K out of range");
  KmeansHooks hooks(ps, spec.ranking);
  const int pool = pool_size(plan.pool_rule, plan.fixed_pool, K) * spec.pool_scale;
  auto ph = hooks.as_pass_hooks();
  return detail::construction_pass(ps, K, pool, spec.pool == PoolPolicy::Greedy, ph, rng);
}

SeedSet run_reselection_pass(const PointSet& ps, const SeedSet& seeds,
                             const PassSpec& spec, const SeedingPlan& plan,
                             RngStream& rng) {
  validate_pass(spec, false);
  const int K = int(seeds.size());
  if (K < 1) throw std::invalid_argument("run_reselection_pass: empty seed set");
  KmeansHooks hooks(ps, spec.ranking);
  const int pool = pool_size(plan.pool_rule, plan.fixed_pool, K) * spec.pool_scale;
  auto ph = hooks.as_pass_hooks();
  return detail::reselection_pass(ps, seeds, pool, spec.pool == PoolPolicy::Greedy,
                                  spec.direction == Direction::Zag, ph, rng);
}

SeedSet seed(const PointSet& ps, int K, const SeedingPlan& plan, RngStream& rng) {
  if (plan.passes.empty()) throw std::invalid_argument("seed: empty plan");
  if (K < 1 || Index(K) > ps.n()) throw std::invalid_argument("seed: K out of range");
  SeedSet seeds = run_construction_pass(ps, plan.passes.front(), plan, K, rng);
  for (std::size_t p = 1; p < plan.passes.size(); ++p)
    seeds = run_reselection_pass(ps, seeds, plan.passes[p], plan, rng);
  return seeds;
}

namespace {

// Nearest and second-nearest seed distances; the workhorse of swap-based
// refinements.
struct Near2 {
  std::vector<double> d1, d2nd;
  std::vector<int> owner;

  void rebuild(const PointSet& ps, const SeedSet& seeds) {
    const Index n = ps.n();
    d1.assign(std::size_t(n), kInf);
    d2nd.assign(std::size_t(n), kInf);
    owner.assign(std::size_t(n), -1);
    for (std::size_t p = 0; p < seeds.size(); ++p) add_seed(ps, seeds[p], int(p));
  }

  void add_seed(const PointSet& ps, Index seed_point, int position) {
    const auto row = ps.points.row(seed_point);
    for (Index j = 0; j < ps.n(); ++j) {
      const double dd = (ps.points.row(j) - row).squaredNorm();
      auto sj = std::size_t(j);
      if (dd < d1[sj]) {
        d2nd[sj] = d1[sj];
        d1[sj] = dd;
        owner[sj] = position;
      } else if (dd < d2nd[sj]) {
        d2nd[sj] = dd;
      }
    }
  }

  double phi() const { return pairwise_sum(d1); }
};

}  // namespace

SeedSet local_search_pp(const PointSet& ps, SeedSet seeds, int Z, RngStream& rng) {
  if (Z < 0) throw std::invalid_argument("local_search_pp: Z must be >= 0");
  const std::size_t K = seeds.size();
  if (K == 0) throw std::invalid_argument("local_search_pp: empty seed set");
  Near2 nc;
  nc.rebuild(ps, seeds);
  std::vector<double> dc(static_cast<std::size_t>(ps.n()));
  for (int z = 0; z < Z; ++z) {
    double wsum = 0.0;
    for (double w : nc.d1) wsum += w;
    if (!(wsum > 0.0)) break;  // seeds already cover every point
    const Index cand = sample_d2(nc.d1, rng);

    const auto cand_row = ps.points.row(cand);
    for (Index j = 0; j < ps.n(); ++j) dc[std::size_t(j)] = (ps.points.row(j) - cand_row).squaredNorm();

    // Cost of swapping out seed i, all i at once: start from the cost with
    // the candidate simply added, then per owner undo its nearest distance.
    double base_cost = 0.0;
    std::vector<double> delta(K, 0.0);
    for (std::size_t j = 0; j < std::size_t(ps.n()); ++j) {
      const double kept = std::min(nc.d1[j], dc[j]);
      base_cost += kept;
      delta[std::size_t(nc.owner[j])] += std::min(nc.d2nd[j], dc[j]) - kept;
    }
    std::size_t best_i = 0;
    double best_cost = kInf;
    for (std::size_t i = 0; i < K; ++i) {
      const double cost = base_cost + delta[i];
      if (cost < best_cost) {
        best_cost = cost;
        best_i = i;
      }
    }
    double phi_cur = 0.0;
    for (double w : nc.d1) phi_cur += w;
    if (best_cost < phi_cur) {
      seeds[best_i] = cand;
      nc.rebuild(ps, seeds);
    }
  }
  return seeds;
}

SeedSet multiswap_greedy(const PointSet& ps, SeedSet seeds, int Z, int p,
                         RngStream& rng, bool revert_on_increase) {
  if (Z < 0 || p < 1) throw std::invalid_argument("multiswap_greedy: bad Z or p");
  const std::size_t K = seeds.size();
  if (K == 0) throw std::invalid_argument("multiswap_greedy: empty seed set");
  Near2 nc;
  for (int z = 0; z < Z; ++z) {
    const SeedSet snapshot = seeds;
    nc.rebuild(ps, seeds);
    double phi_before = 0.0;
    for (double w : nc.d1) phi_before += w;

    // Grow by p via D^2.
    for (int t = 0; t < p; ++t) {
      double wsum = 0.0;
      for (double w : nc.d1) wsum += w;
      Index cand;
      if (wsum > 0.0) {
        cand = sample_d2(nc.d1, rng);
      } else {
        std::vector<Index> open;
        for (Index j = 0; j < ps.n(); ++j)
          if (std::find(seeds.begin(), seeds.end(), j) == seeds.end()) open.push_back(j);
        if (open.empty()) break;
        cand = open[rng.below(open.size())];
      }
      seeds.push_back(cand);
      nc.add_seed(ps, cand, int(seeds.size()) - 1);
    }

    // Shrink back to K, each removal minimizing the phi_S increase.
    while (seeds.size() > K) {
      std::vector<double> increase(seeds.size(), 0.0);
      for (std::size_t j = 0; j < std::size_t(ps.n()); ++j)
        increase[std::size_t(nc.owner[j])] += nc.d2nd[j] - nc.d1[j];
      std::size_t worst = 0;
      double best_inc = kInf;
      for (std::size_t i = 0; i < increase.size(); ++i) {
        if (increase[i] < best_inc) {
          best_inc = increase[i];
          worst = i;
        }
      }
      seeds.erase(seeds.begin() + std::ptrdiff_t(worst));
      nc.rebuild(ps, seeds);
    }

    double phi_after = 0.0;
    for (double w : nc.d1) phi_after += w;
    if (revert_on_increase && !(phi_after < phi_before)) seeds = snapshot;
  }
  return seeds;
}

SeedingPlan kmeans_plan_preset(std::string_view name, PoolRule rule, int fixed_pool) {
  SeedingPlan plan;
  plan.pool_rule = rule;
  plan.fixed_pool = fixed_pool;
  const PassSpec one{PoolPolicy::One, RankMetric::NA, Direction::Zig, 1};
  const PassSpec one_zag{PoolPolicy::One, RankMetric::NA, Direction::Zag, 1};
  const PassSpec egd{PoolPolicy::Greedy, RankMetric::Data, Direction::Zig, 1};
  const PassSpec egd_zag{PoolPolicy::Greedy, RankMetric::Data, Direction::Zag, 1};
  const PassSpec egc_zag{PoolPolicy::Greedy, RankMetric::Com, Direction::Zag, 1};

  if (name == "EON") {
    plan.passes = {one};
  } else if (name == "EGD") {
    plan.passes = {egd};
  } else if (name == "EGD2") {
    PassSpec wide = egd;
    wide.pool_scale = 2;
    plan.passes = {wide};
  } else if (name == "EON-EON") {
    plan.passes = {one, one_zag};
  } else if (name == "EGD-EGD") {
    plan.passes = {egd, egd_zag};
  } else if (name == "EGD-EGC") {
    plan.passes = {egd, egc_zag};
  } else {
    throw std::invalid_argument("unknown k-means seeding preset: " + std::string(name));
  }
  return plan;
}

const std::vector<std::string>& kmeans_method_names() {
  static const std::vector<std::string> names = {"EON",     "EGD",     "EGD2",
                                                 "EON-EON", "EGD-EGD", "EGD-EGC",
                                                 "LSPP",    "MSG"};
  return names;
}

SeedSet run_kmeans_method(const PointSet& ps, int K, std::string_view method,
                          PoolRule rule, int fixed_pool, RngStream& rng) {
  if (method == "LSPP") {
    SeedSet s = seed(ps, K, kmeans_plan_preset("EON", rule, fixed_pool), rng);
    return local_search_pp(ps, std::move(s), K, rng);
  }
  if (method == "MSG") {
    SeedSet s = seed(ps, K, kmeans_plan_preset("EON", rule, fixed_pool), rng);
    return multiswap_greedy(ps, std::move(s), K, pool_size(rule, fixed_pool, K), rng);
  }
  return seed(ps, K, kmeans_plan_preset(method, rule, fixed_pool), rng);
}

}  // namespace seedkit
