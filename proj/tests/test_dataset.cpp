#include <doctest.h>

#include <algorithm>

#include "seedkit/dataset.hpp"
#include "support/oracles.hpp"

using namespace seedkit;

TEST_CASE("csv: plain numeric file") {
  const PointSet ps = parse_csv("0,0\n1,0\n0,1\n");
  CHECK(ps.n() == 3);
  CHECK(ps.d() == 2);
  CHECK(ps.points(1, 0) == 1.0);
  CHECK(ps.points(2, 1) == 1.0);
}

TEST_CASE("csv: header flag skips the first line") {
  const CsvOptions with_header{.delimiter = ',', .header = true};
  const PointSet a = parse_csv("x,y\n0,0\n1,0\n0,1\n", with_header);
  const PointSet b = parse_csv("0,0\n1,0\n0,1\n");
  CHECK(a.points == b.points);
}

TEST_CASE("csv: non-numeric token names row and column") {
  CHECK_THROWS_WITH_AS(parse_csv("1,a\n"), doctest::Contains("row 1 column 2"),
                       std::runtime_error);
}

TEST_CASE("csv: ragged rows rejected") {
  CHECK_THROWS_AS(parse_csv("1,2\n3\n"), std::runtime_error);
}

TEST_CASE("csv: non-finite values rejected") {
  CHECK_THROWS_AS(parse_csv("1,nan\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_csv("1,inf\n"), std::runtime_error);
}

TEST_CASE("csv: missing file") {
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("csv: dropped columns and custom delimiter") {
  CsvOptions opts;
  opts.delimiter = ';';
  opts.drop_columns = {2};
  const PointSet ps = parse_csv("1;2;label\n3;4;label\n", opts);
  CHECK(ps.n() == 2);
  CHECK(ps.d() == 2);
  CHECK(ps.points(1, 1) == 4.0);
}

TEST_CASE("minmax_normalize: affine map and constant columns") {
  Matrix m(3, 2);
  m << 2, 5, 4, 5, 6, 5;
  const PointSet out = minmax_normalize(PointSet(m));
  CHECK(out.points(0, 0) == 0.0);
  CHECK(out.points(1, 0) == 0.5);
  CHECK(out.points(2, 0) == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(out.points(i, 1) == 0.0);
}

TEST_CASE("minmax_normalize: columns are independent and span [0,1]") {
  RngStream rng(5);
  const PointSet ps = oracles::random_points(50, 3, rng);
  const PointSet out = minmax_normalize(ps);
  for (Index c = 0; c < out.d(); ++c) {
    CHECK(out.points.col(c).minCoeff() == doctest::Approx(0.0));
    CHECK(out.points.col(c).maxCoeff() == doctest::Approx(1.0));
  }
}

TEST_CASE("minmax_normalize: idempotent on non-constant data") {
  RngStream rng(6);
  const PointSet ps = oracles::random_points(40, 4, rng);
  const PointSet once = minmax_normalize(ps);
  const PointSet twice = minmax_normalize(once);
  CHECK((once.points - twice.points).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("knn: examples") {
  Matrix m(3, 1);
  m << 0, 1, 3;
  const PointSet ps(m);
  CHECK(knn(ps, 0, 1) == std::vector<Index>{1});
  CHECK(knn(ps, 0, 2) == std::vector<Index>{1, 2});

  Matrix eq(3, 1);
  eq << 0, -1, 1;  // both neighbors equidistant from point 0
  CHECK(knn(PointSet(eq), 0, 1) == std::vector<Index>{1});

  CHECK_THROWS_AS(knn(ps, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(knn(ps, 0, 3), std::invalid_argument);
}

TEST_CASE("knn: matches a brute-force sort on random instances") {
  RngStream rng(7);
  const PointSet ps = oracles::random_points(150, 3, rng);
  for (Index i : {Index(0), Index(63), Index(149)}) {
    std::vector<std::pair<double, Index>> all;
    for (Index j = 0; j < ps.n(); ++j) {
      if (j == i) continue;
      all.emplace_back((ps.points.row(j) - ps.points.row(i)).squaredNorm(), j);
    }
    std::sort(all.begin(), all.end());
    for (Index L : {Index(1), Index(10), ps.n() - 1}) {
      const auto got = knn(ps, i, L);
      REQUIRE(Index(got.size()) == L);
      for (Index q = 0; q < L; ++q) CHECK(got[std::size_t(q)] == all[std::size_t(q)].second);
    }
  }
}
