#include "pass_engine.hpp"

#include <numeric>
#include <stdexcept>

#include "seedkit/seeding.hpp"

namespace seedkit::detail {

std::vector<Index> draw_pool(const PointSet& ps, std::vector<double> weights,
                             int count, const SeedSet& taken, RngStream& rng) {
  for (Index t : taken) weights[std::size_t(t)] = 0.0;
  std::vector<Index> pool;
  pool.reserve(std::size_t(count));
  for (int c = 0; c < count; ++c) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum > 0.0)) break;
    const Index pick = sample_d2(weights, rng);
    pool.push_back(pick);
    weights[std::size_t(pick)] = 0.0;
  }
  if (pool.empty()) {
    std::vector<Index> open;
    open.reserve(std::size_t(ps.n()));
    for (Index j = 0; j < ps.n(); ++j) {
      if (std::find(taken.begin(), taken.end(), j) == taken.end()) open.push_back(j);
    }
    if (open.empty()) throw std::runtime_error("draw_pool: no candidate left to draw");
    pool.push_back(open[rng.below(open.size())]);
  }
  return pool;
}

SeedSet construction_pass(const PointSet& ps, int K, int pool_count, bool greedy,
                          const PassHooks& hooks, RngStream& rng) {
  SeedSet seeds;
  seeds.reserve(std::size_t(K));
  for (int k = 0; k < K; ++k) {
    auto w = hooks.weights(seeds);
    auto pool = draw_pool(ps, std::move(w), greedy ? pool_count : 1, seeds, rng);
    const Index winner = greedy ? hooks.rank(seeds, pool) : pool[0];
    seeds.push_back(winner);
    if (hooks.changed) hooks.changed(seeds, true);
  }
  return seeds;
}

SeedSet reselection_pass(const PointSet& ps, SeedSet seeds, int pool_count,
                         bool greedy, bool zag, const PassHooks& hooks,
                         RngStream& rng) {
  const int K = int(seeds.size());
  SeedSet base(std::size_t(K > 0 ? K - 1 : 0));
  for (int step = 0; step < K; ++step) {
    const int k = zag ? K - 1 - step : step;
    const Index incumbent = seeds[std::size_t(k)];
    for (int i = 0, b = 0; i < K; ++i) {
      if (i != k) base[std::size_t(b++)] = seeds[std::size_t(i)];
    }
    auto w = hooks.weights(base);
    auto pool = draw_pool(ps, std::move(w), greedy ? pool_count : 1, base, rng);
    Index winner;
    if (greedy) {
      pool.push_back(incumbent);  // fresh draws first, incumbent last
      winner = hooks.rank(base, pool);
    } else {
      winner = pool[0];
    }
    seeds[std::size_t(k)] = winner;
    if (hooks.changed) hooks.changed(seeds, false);
  }
  return seeds;
}

}  // namespace seedkit::detail
