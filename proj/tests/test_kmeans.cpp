#include <doctest.h>

#include "seedkit/kmeans.hpp"
#include "support/oracles.hpp"

using namespace seedkit;

namespace {
PointSet line4() {
  Matrix m(4, 1);
  m << 0, 1, 10, 11;
  return PointSet(m);
}
}  // namespace

TEST_CASE("assign: nearest center with smallest-index ties") {
  Matrix pts(2, 1);
  pts << 0, 10;
  Matrix centers(2, 1);
  centers << 0, 10;
  CHECK(assign(PointSet(pts), centers) == std::vector<int>{0, 1});

  Matrix mid(1, 1);
  mid << 5;  // equidistant to both centers
  CHECK(assign(PointSet(mid), centers) == std::vector<int>{0});

  Matrix one(1, 1);
  one << 3;
  CHECK(assign(PointSet(pts), one) == std::vector<int>{0, 0});

  Matrix bad(1, 2);
  CHECK_THROWS_AS(assign(PointSet(pts), bad), std::invalid_argument);
}

TEST_CASE("centroids: means, singletons and empty-cluster repair") {
  Matrix pts(2, 1);
  pts << 0, 2;
  const Matrix c = centroids(PointSet(pts), {0, 0}, 1);
  CHECK(c(0, 0) == 1.0);

  // Empty cluster 1 takes the point farthest from its centroid.
  Matrix pts3(3, 1);
  pts3 << 0, 1, 5;
  const Matrix r = centroids(PointSet(pts3), {0, 0, 0}, 2);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 0) == 5.0);

  const Matrix s = centroids(PointSet(pts), {0, 1}, 2);
  CHECK(s(0, 0) == 0.0);
  CHECK(s(1, 0) == 2.0);
}

TEST_CASE("sse: examples") {
  Matrix pts(2, 1);
  pts << 0, 2;
  Matrix c(1, 1);
  c << 1;
  CHECK(sse(PointSet(pts), c) == doctest::Approx(2.0));
  CHECK(sse(PointSet(pts), pts) == 0.0);

  Matrix c2(2, 1);
  c2 << 0.5, 10.5;
  CHECK(sse(line4(), c2) == doctest::Approx(1.0));
}

TEST_CASE("sse_com: composition of assign, centroids, sse") {
  const PointSet ps = line4();
  // Oracle: seeds {0, 10} split the line into {0,1} and {10,11}; the induced
  // centroids are 0.5 and 10.5, so every point contributes 0.25.
  CHECK(sse_com(ps, {0, 2}) == doctest::Approx(1.0));

  // One seed: total variance about the global mean.
  const double mean = ps.points.col(0).mean();
  double var = 0.0;
  for (Index i = 0; i < ps.n(); ++i) var += (ps.points(i, 0) - mean) * (ps.points(i, 0) - mean);
  CHECK(sse_com(ps, {0}) == doctest::Approx(var));

  CHECK(sse_com(ps, {0, 1, 2, 3}) == 0.0);
}

TEST_CASE("sse_com never exceeds phi_S of the same seeds") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet ps = oracles::random_points(30, 2, rng);
    SeedSet seeds;
    while (seeds.size() < 4) {
      const Index c = Index(rng.below(30));
      if (std::find(seeds.begin(), seeds.end(), c) == seeds.end()) seeds.push_back(c);
    }
    const double phi_s = sse(ps, gather_rows(ps, seeds));
    CHECK(sse_com(ps, seeds) <= phi_s + 1e-12);
  }
}

TEST_CASE("lloyd: fixed point converges in one iteration") {
  const PointSet ps = line4();
  Matrix init(2, 1);
  init << 0.5, 10.5;
  const auto res = lloyd(ps, init);
  CHECK(res.iterations == 1);
  CHECK(res.sse == doctest::Approx(1.0));
  CHECK(res.centers == init);
}

TEST_CASE("lloyd: two-cluster line instance reaches the optimum") {
  const PointSet ps = line4();
  Matrix init(2, 1);
  init << 0, 10;
  const auto res = lloyd(ps, init);
  CHECK(res.centers(0, 0) == doctest::Approx(0.5));
  CHECK(res.centers(1, 0) == doctest::Approx(10.5));
  CHECK(res.sse == doctest::Approx(1.0));
  CHECK(res.sse == doctest::Approx(oracles::brute_force_sse_opt(ps, 2)));
  CHECK(res.labels == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("lloyd: huge tolerance stops after the first iteration") {
  RngStream rng(12);
  const PointSet ps = oracles::random_points(50, 2, rng);
  Matrix init = ps.points.topRows(3);
  const auto res = lloyd(ps, init, 1e9, 50);
  CHECK(res.iterations == 1);
}

TEST_CASE("lloyd: SSE trace is non-increasing") {
  RngStream rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet ps = oracles::random_points(80, 3, rng);
    Matrix init(4, 3);
    for (int i = 0; i < 4; ++i) init.row(i) = ps.points.row(Index(rng.below(80)));
    std::vector<double> trace;
    lloyd(ps, init, 1e-9, 50, &trace);
    for (std::size_t t = 1; t < trace.size(); ++t) CHECK(trace[t] <= trace[t - 1]);
  }
}

TEST_CASE("lloyd half-step never increases the SSE") {
  RngStream rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet ps = oracles::random_points(40, 2, rng);
    Matrix c(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) c(i, j) = rng.next_double() * 2 - 0.5;
    const auto labels = assign(ps, c);
    const Matrix next = centroids(ps, labels, 3);
    CHECK(sse(ps, next) <= sse(ps, c) + 1e-12);
  }
}

TEST_CASE("lloyd: never beats the brute-force partition optimum") {
  RngStream rng(15);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 6 + Index(rng.below(6));
    const int K = 2 + int(rng.below(2));
    const PointSet ps = oracles::random_points(n, 2, rng);
    const double opt = oracles::brute_force_sse_opt(ps, K);
    Matrix init(K, 2);
    for (int i = 0; i < K; ++i) init.row(i) = ps.points.row(Index(rng.below(std::uint64_t(n))));
    const auto res = lloyd(ps, init);
    CHECK(res.sse >= opt - 1e-9);
  }
}
