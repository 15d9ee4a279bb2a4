#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "seedkit/kmeans.hpp"
#include "seedkit/rng.hpp"

namespace seedkit {

enum class PoolPolicy { One, Greedy };
enum class RankMetric { Data, Com, NA };  // Data = phi_S, Com = phi_COM
enum class Direction { Zig, Zag };        // positions 1..K vs K..1
enum class PoolRule { Log, Sqrt, Linear, Fixed };

/// One seeding pass. pool=One implies ranking=NA (a single draw is accepted
/// unconditionally); pool_scale multiplies the pool size (2 for EGD2).
struct PassSpec {
  PoolPolicy pool = PoolPolicy::One;
  RankMetric ranking = RankMetric::NA;
  Direction direction = Direction::Zig;
  int pool_scale = 1;
};

/// A sequence of passes: pass 1 constructs a seed set from scratch, every
/// later pass reselects the K seeds in its declared direction.
struct SeedingPlan {
  std::vector<PassSpec> passes;
  PoolRule pool_rule = PoolRule::Log;
  int fixed_pool = 0;  // used when pool_rule == Fixed
};

/// Candidate pool size for K clusters: Log -> max(1, floor(ln K) + 2),
/// Sqrt -> floor(sqrt K) + 2, Linear -> max(2, K), Fixed -> the given value.
int pool_size(PoolRule rule, int fixed_pool, int K);

/// Per-point squared distance to the nearest seed, plus which seed attains
/// it. Addition updates in O(n); removals rebuild in O(Kn).
struct NearestSeedCache {
  Vector d2;                  // squared distance to nearest seed
  std::vector<Index> owner;   // position in the seed list attaining d2
  void init_empty(const PointSet& ps);
  void add_seed(const PointSet& ps, Index seed_point, Index position);
  void rebuild(const PointSet& ps, const SeedSet& seeds);
  double phi_s() const;       // pairwise-summed SSE of the cached distances
};

/// D^2 weights: w_j = min over seeds of ||x_j - seed||^2; all ones when the
/// seed set is empty (first-seed rule).
std::vector<double> d2_weights(const PointSet& ps, const SeedSet& seeds);

/// Sample an index with probability proportional to its weight.
/// Throws when every weight is zero.
Index sample_d2(const std::vector<double>& weights, RngStream& rng);

/// Among candidates, the one minimizing phi_S (Data) or phi_COM (Com) of
/// base + candidate; ties go to the earliest list position.
Index rank_candidates(const PointSet& ps, const SeedSet& base,
                      const std::vector<Index>& candidates, RankMetric metric);

/// Pass 1 of a plan: grow a seed set from empty to K.
SeedSet run_construction_pass(const PointSet& ps, const PassSpec& spec,
                              const SeedingPlan& plan, int K, RngStream& rng);

/// Reselection pass over a complete seed set: visit positions in the pass
/// direction, delete the incumbent, redraw a pool against the remaining
/// seeds (the incumbent joins the pool under a Greedy policy), and insert
/// the winner back at the position. The set never exceeds K seeds.
SeedSet run_reselection_pass(const PointSet& ps, const SeedSet& seeds,
                             const PassSpec& spec, const SeedingPlan& plan,
                             RngStream& rng);

/// Run a full plan: construction pass then reselection passes.
SeedSet seed(const PointSet& ps, int K, const SeedingPlan& plan, RngStream& rng);

/// LocalSearch++: Z rounds of sample-one-candidate / best-single-swap,
/// accepting only strict phi_S decreases.
SeedSet local_search_pp(const PointSet& ps, SeedSet seeds, int Z, RngStream& rng);

/// Greedy multi-swap: Z rounds of add-p-by-D^2 then remove-p-greedily
/// (each removal minimizes the phi_S increase). With revert_on_increase the
/// round is undone unless phi_S strictly decreased.
SeedSet multiswap_greedy(const PointSet& ps, SeedSet seeds, int Z, int p,
                         RngStream& rng, bool revert_on_increase = true);

/// Named plan presets: EON, EGD, EGD2, EON-EON, EGD-EGD, EGD-EGC.
SeedingPlan kmeans_plan_preset(std::string_view name, PoolRule rule = PoolRule::Log,
                               int fixed_pool = 0);

/// All method names the benchmark accepts (plan presets plus LSPP and MSG).
const std::vector<std::string>& kmeans_method_names();

/// Run a named seeding method end to end (plans, or EON followed by the
/// LSPP / MSG refinement with their defaults Z=K, p=pool size).
SeedSet run_kmeans_method(const PointSet& ps, int K, std::string_view method,
                          PoolRule rule, int fixed_pool, RngStream& rng);

}  // namespace seedkit
