#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seedkit/dataset.hpp"
#include "seedkit/seeding.hpp"

namespace seedkit {

struct RunRecord {
  std::string dataset;
  std::string group;  // empty unless the dataset belongs to a named group
  std::string method;
  int repeat = 0;
  double objective = 0.0;          // final SSE (k-means) or final LL (GMM)
  double seeding_objective = 0.0;  // phi_S / phi_COM at seeding, or initial LL
  int iterations = 0;
  double seeding_seconds = 0.0;
  double total_seconds = 0.0;
  std::uint64_t stream = 0;        // rng stream id of the run
};

struct BenchDataset {
  std::string id;
  std::string group;
  PointSet points;
  int k = 1;
};

struct BenchConfig {
  std::vector<BenchDataset> datasets;
  std::vector<std::string> methods;
  int repeats = 10;
  PoolRule pool_rule = PoolRule::Log;
  int fixed_pool = 0;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  double lloyd_tol = 1e-4;
  int lloyd_max_iter = 50;
  double em_tol = 1e-4;
  int em_max_iter = 100;
};

struct CellStats {
  std::string dataset;
  std::string method;
  double mean_objective = 0.0;
  double mean_seeding_objective = 0.0;
  double mean_iterations = 0.0;
  double mean_seeding_seconds = 0.0;
  double mean_total_seconds = 0.0;
  std::optional<double> pearson;   // (seeding objective, final objective)
  std::optional<double> spearman;
};

struct BenchReport {
  std::string kind;  // "kmeans" or "gmm"
  std::uint64_t master_seed = 0;
  int repeats = 0;
  std::string pool_rule;
  std::vector<std::string> datasets;
  std::vector<std::string> dataset_groups;  // parallel to datasets
  std::vector<std::string> methods;
  std::vector<RunRecord> records;           // repeats * |datasets| * |methods|
  std::vector<CellStats> cells;             // dataset-major, then method
  // Normalized aggregates, one row per dataset, one column per method.
  std::vector<std::vector<double>> mm_mean;
  std::vector<std::vector<double>> mm_global;
  std::vector<std::vector<double>> mm_mean_seeding_time;
  std::vector<std::vector<double>> mm_mean_total_time;
  // GMM only: per-row min-max of mean LL (1 = best) and per-group column means.
  std::vector<std::vector<double>> ll_row_normalized;
  std::vector<std::string> group_names;
  std::vector<std::vector<double>> group_means;
};

/// Eq.-style min-max over per-method means: (v - min) / (max - min); an
/// all-equal input maps to all zeros.
std::vector<double> minmax_mean(const std::vector<double>& means);

/// Means normalized against the min/max of all raw (method, repeat) values of
/// one dataset.
std::vector<double> minmax_global(const std::vector<double>& all_values,
                                  const std::vector<double>& means);

/// Per-row min-max scaling of a datasets x methods matrix of final LLs;
/// 1 is the best (highest) entry of the row, constant rows map to zeros.
std::vector<std::vector<double>> loglik_row_normalize(
    const std::vector<std::vector<double>>& matrix);

/// Pearson and Spearman correlation; requires >= 3 pairs. A zero-variance
/// input yields an empty optional.
std::pair<std::optional<double>, std::optional<double>> correlations(
    const std::vector<double>& x, const std::vector<double>& y);

BenchReport run_kmeans_bench(const BenchConfig& config);
BenchReport run_gmm_bench(const BenchConfig& config);

/// Deterministic report JSON: everything except wall-clock timings.
std::string report_to_json(const BenchReport& report);
/// Timing side-channel JSON (mean seconds and their min-max normalizations).
std::string timings_to_json(const BenchReport& report);
/// Flat per-run CSV of all records, timings included.
std::string records_to_csv(const BenchReport& report);

/// Rebuild a report (aggregates recomputed) from a records CSV produced by
/// records_to_csv; run metadata comes from the CSV's leading comment line.
BenchReport report_from_records_csv(const std::string& csv_text);

PoolRule parse_pool_rule(const std::string& text, int& fixed_pool);
std::string pool_rule_name(PoolRule rule, int fixed_pool);

}  // namespace seedkit
