#pragma once

#include <functional>
#include <vector>

#include "seedkit/dataset.hpp"
#include "seedkit/kmeans.hpp"
#include "seedkit/rng.hpp"

namespace seedkit::detail {

/// Hook bundle driving one seeding pass. The engine calls weights() for a
/// position before rank() at that same position, so hooks may cache state
/// keyed on the base seed set they last saw.
struct PassHooks {
  /// Sampling weights against the given (possibly incomplete) seed set.
  std::function<std::vector<double>(const SeedSet&)> weights;
  /// Winner among candidates, given the base set with one slot open.
  std::function<Index(const SeedSet& base, const std::vector<Index>& candidates)> rank;
  /// The working seed set changed; `appended` means old set plus one trailing seed.
  std::function<void(const SeedSet&, bool appended)> changed;
};

/// Weighted sampling without replacement within one pool. Members of `taken`
/// are masked out. If no positive weight remains the pool degenerates to a
/// single uniform draw over the indices not in `taken`.
std::vector<Index> draw_pool(const PointSet& ps, std::vector<double> weights,
                             int count, const SeedSet& taken, RngStream& rng);

SeedSet construction_pass(const PointSet& ps, int K, int pool_count, bool greedy,
                          const PassHooks& hooks, RngStream& rng);

/// One reselection sweep. Under a Greedy policy the deleted incumbent is
/// appended to the fresh pool; under One the fresh draw replaces it
/// unconditionally.
SeedSet reselection_pass(const PointSet& ps, SeedSet seeds, int pool_count,
                         bool greedy, bool zag, const PassHooks& hooks,
                         RngStream& rng);

}  // namespace seedkit::detail
