#include <doctest.h>

#include <set>

#include "seedkit/rng.hpp"
#include "support/oracles.hpp"

using seedkit::RngStream;

TEST_CASE("rng: same seed and stream reproduce the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: distinct streams differ") {
  RngStream a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    same_ab += a.next_u64() == b.next_u64();
    same_ac += a.next_u64() == c.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("rng: next_double lies in [0,1) and is roughly uniform") {
  RngStream rng(1);
  const int buckets = 20;
  const long draws = 100000;
  std::vector<long> counts(buckets, 0);
  for (long i = 0; i < draws; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++counts[std::size_t(u * buckets)];
  }
  const std::vector<double> probs(buckets, 1.0 / buckets);
  CHECK(oracles::chi2_pvalue(counts, probs, draws) > 1e-6);
}

TEST_CASE("rng: below respects the bound") {
  RngStream rng(3);
  for (int bound : {1, 2, 7, 1000}) {
    for (int i = 0; i < 200; ++i) {
      const auto v = rng.below(std::uint64_t(bound));
      CHECK(v < std::uint64_t(bound));
    }
  }
}

TEST_CASE("rng: split produces independent children deterministically") {
  RngStream parent(11, 5);
  RngStream c1 = parent.split(0);
  RngStream c2 = parent.split(1);
  RngStream c1_again = RngStream(11, 5).split(0);
  CHECK(c1.next_u64() == c1_again.next_u64());
  CHECK(c1.next_u64() != c2.next_u64());
}

TEST_CASE("rng: normal deviates have sane moments") {
  RngStream rng(9);
  const long n = 200000;
  double sum = 0, sum2 = 0;
  for (long i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / double(n);
  const double var = sum2 / double(n) - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("rng: run_stream_id separates runs") {
  std::set<std::uint64_t> ids;
  for (int r = 0; r < 10; ++r) {
    ids.insert(seedkit::run_stream_id("ds1", "EON", std::uint64_t(r)));
    ids.insert(seedkit::run_stream_id("ds1", "EGD", std::uint64_t(r)));
    ids.insert(seedkit::run_stream_id("ds2", "EON", std::uint64_t(r)));
  }
  CHECK(ids.size() == 30);
}
