#include <doctest.h>

#include <cmath>

#include "seedkit/bench.hpp"
#include "support/oracles.hpp"

using namespace seedkit;

TEST_CASE("minmax_mean: affine map, degenerate cases, polarity") {
  CHECK(minmax_mean({2, 4, 6}) == std::vector<double>{0, 0.5, 1});
  CHECK(minmax_mean({5}) == std::vector<double>{0});
  CHECK(minmax_mean({3, 3, 3}) == std::vector<double>{0, 0, 0});
  // The formula maps the smallest mean (for SSE: the best method) to 0.
  const auto v = minmax_mean({10.0, 2.5, 7.0});
  CHECK(v[1] == 0.0);
  CHECK(v[0] == 1.0);
}

TEST_CASE("minmax_global: normalization against the raw hull") {
  const auto v = minmax_global({10, 12, 18, 20}, {15.0, 10.0});
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == 0.0);
  for (double x : v) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("loglik_row_normalize: per-row scaling, 1 = best") {
  const auto m = loglik_row_normalize({{-10, -5}, {-7, -7}});
  CHECK(m[0] == std::vector<double>{0, 1});
  CHECK(m[1] == std::vector<double>{0, 0});
  const auto g = loglik_row_normalize({{0, 1}, {1, 0}});
  CHECK((g[0][0] + g[1][0]) / 2 == doctest::Approx(0.5));
  CHECK((g[0][1] + g[1][1]) / 2 == doctest::Approx(0.5));
}

TEST_CASE("correlations: linear, monotone, independent, degenerate") {
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(i);
    y.push_back(2.0 * i + 1.0);
  }
  auto [p, s] = correlations(x, y);
  CHECK(*p == doctest::Approx(1.0));
  CHECK(*s == doctest::Approx(1.0));

  std::vector<double> cube;
  for (double xi : x) cube.push_back(xi * xi * xi - 500.0);
  auto [p2, s2] = correlations(x, cube);
  CHECK(*s2 == doctest::Approx(1.0));
  CHECK(*p2 < 1.0);
  CHECK(*p2 > 0.0);

  RngStream rng(80);
  std::vector<double> a(10000), b(10000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.next_double();
    b[i] = rng.next_double();
  }
  auto [p3, s3] = correlations(a, b);
  CHECK(std::abs(*p3) < 0.05);
  CHECK(std::abs(*s3) < 0.05);

  auto [p4, s4] = correlations({1, 1, 1}, {2, 3, 4});
  CHECK(!p4.has_value());
  CHECK_THROWS_AS(correlations({1, 2}, {3, 4}), std::invalid_argument);
}

TEST_CASE("pool rule parsing round-trips") {
  int fixed = 0;
  CHECK(parse_pool_rule("log", fixed) == PoolRule::Log);
  CHECK(parse_pool_rule("sqrt", fixed) == PoolRule::Sqrt);
  CHECK(parse_pool_rule("linear", fixed) == PoolRule::Linear);
  CHECK(parse_pool_rule("fixed:6", fixed) == PoolRule::Fixed);
  CHECK(fixed == 6);
  CHECK(pool_rule_name(PoolRule::Fixed, 6) == "fixed:6");
  CHECK_THROWS_AS(parse_pool_rule("nope", fixed), std::invalid_argument);
}

namespace {

BenchConfig small_kmeans_config(int repeats, std::vector<std::string> methods) {
  RngStream rng(81);
  BenchConfig config;
  BenchDataset ds;
  ds.id = "blobs";
  ds.points = oracles::two_blobs(120, 2, 8.0, 1.0, rng);
  ds.k = 2;
  config.datasets.push_back(std::move(ds));
  config.methods = std::move(methods);
  config.repeats = repeats;
  config.master_seed = 7;
  config.threads = 2;
  return config;
}

}  // namespace

TEST_CASE("run_kmeans_bench: duplicated method shares streams and zeroes the range") {
  const auto report = run_kmeans_bench(small_kmeans_config(5, {"EON", "EON"}));
  REQUIRE(report.cells.size() == 2);
  CHECK(report.cells[0].mean_objective == report.cells[1].mean_objective);
  CHECK(report.mm_mean[0] == std::vector<double>{0, 0});
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(report.records[r].objective == report.records[5 + r].objective);
    CHECK(report.records[r].stream == report.records[5 + r].stream);
  }
}

TEST_CASE("run_kmeans_bench: R=1 single method keeps raw values, normalization degenerate") {
  const auto report = run_kmeans_bench(small_kmeans_config(1, {"EGD"}));
  REQUIRE(report.records.size() == 1);
  CHECK(report.cells[0].mean_objective == report.records[0].objective);
  CHECK(report.mm_mean[0] == std::vector<double>{0});
  CHECK(!report.cells[0].pearson.has_value());
}

TEST_CASE("run_kmeans_bench: every cell is backed by exactly R records") {
  const auto report = run_kmeans_bench(small_kmeans_config(4, {"EON", "EGD"}));
  CHECK(report.records.size() == 8);
  for (std::size_t di = 0; di < report.datasets.size(); ++di)
    for (std::size_t mi = 0; mi < report.methods.size(); ++mi)
      for (int r = 0; r < 4; ++r) {
        const auto& rec = report.records[(di * 2 + mi) * 4 + std::size_t(r)];
        CHECK(rec.dataset == report.datasets[di]);
        CHECK(rec.method == report.methods[mi]);
        CHECK(rec.repeat == r);
      }
}

TEST_CASE("run_kmeans_bench: deterministic report regardless of thread count") {
  auto c1 = small_kmeans_config(6, {"EON", "EGD-EGC"});
  auto c2 = small_kmeans_config(6, {"EON", "EGD-EGC"});
  c1.threads = 1;
  c2.threads = 4;
  const auto r1 = run_kmeans_bench(c1);
  const auto r2 = run_kmeans_bench(c2);
  CHECK(report_to_json(r1) == report_to_json(r2));
}

TEST_CASE("run_kmeans_bench: EGD-EGC beats EON on a separated two-blob instance") {
  RngStream rng(82);
  BenchConfig config;
  BenchDataset ds;
  ds.id = "blobs500";
  ds.points = oracles::two_blobs(500, 2, 10.0, 1.0, rng);
  ds.k = 2;
  config.datasets.push_back(std::move(ds));
  config.methods = {"EON", "EGD-EGC"};
  config.repeats = 50;
  config.master_seed = 11;
  const auto report = run_kmeans_bench(config);
  CHECK(report.cells[1].mean_objective <= report.cells[0].mean_objective);
}

TEST_CASE("records csv round-trips into the identical report json") {
  const auto report = run_kmeans_bench(small_kmeans_config(5, {"EON", "EGD"}));
  const auto csv = records_to_csv(report);
  const auto rebuilt = report_from_records_csv(csv);
  CHECK(report_to_json(rebuilt) == report_to_json(report));
}

TEST_CASE("run_gmm_bench: smoke run records initial and final log-likelihood") {
  RngStream rng(83);
  BenchConfig config;
  BenchDataset ds;
  ds.id = "gmmblobs";
  ds.group = "spherical";
  ds.points = oracles::two_blobs(150, 2, 6.0, 1.0, rng);
  ds.k = 2;
  config.datasets.push_back(std::move(ds));
  config.methods = {"EGD", "EGD"};
  config.repeats = 3;
  config.master_seed = 13;
  const auto report = run_gmm_bench(config);
  REQUIRE(report.records.size() == 6);
  for (const auto& rec : report.records) {
    CHECK(std::isfinite(rec.objective));
    CHECK(rec.objective >= rec.seeding_objective - 1e-9);  // EM only improves
    CHECK(rec.iterations >= 1);
  }
  CHECK(report.cells[0].mean_objective == report.cells[1].mean_objective);
  REQUIRE(report.ll_row_normalized.size() == 1);
  CHECK(report.group_names == std::vector<std::string>{"spherical"});
  const auto json = report_to_json(report);
  CHECK(json.find("\"groups\"") != std::string::npos);
}

TEST_CASE("timings json carries the time fields, report json does not") {
  const auto report = run_kmeans_bench(small_kmeans_config(2, {"EON"}));
  const auto rj = report_to_json(report);
  CHECK(rj.find("seconds") == std::string::npos);
  const auto tj = timings_to_json(report);
  CHECK(tj.find("mean_seeding_seconds") != std::string::npos);
}
