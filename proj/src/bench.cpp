#include "seedkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "seedkit/gmm.hpp"
#include "seedkit/gmm_seeding.hpp"
#include "seedkit/kmeans.hpp"
#include "seedkit/rng.hpp"

namespace seedkit {

using json = nlohmann::ordered_json;

std::vector<double> minmax_mean(const std::vector<double>& means) {
  if (means.empty()) throw std::invalid_argument("minmax_mean: empty input");
  const double lo = *std::min_element(means.begin(), means.end());
  const double hi = *std::max_element(means.begin(), means.end());
  std::vector<double> out(means.size(), 0.0);
  if (hi > lo) {
    for (std::size_t i = 0; i < means.size(); ++i) out[i] = (means[i] - lo) / (hi - lo);
  }
  return out;
}

std::vector<double> minmax_global(const std::vector<double>& all_values,
                                  const std::vector<double>& means) {
  if (all_values.empty()) throw std::invalid_argument("minmax_global: no raw values");
  const double lo = *std::min_element(all_values.begin(), all_values.end());
  const double hi = *std::max_element(all_values.begin(), all_values.end());
  std::vector<double> out(means.size(), 0.0);
  if (hi > lo) {
    for (std::size_t i = 0; i < means.size(); ++i) out[i] = (means[i] - lo) / (hi - lo);
  }
  return out;
}

std::vector<std::vector<double>> loglik_row_normalize(
    const std::vector<std::vector<double>>& matrix) {
  std::vector<std::vector<double>> out;
  out.reserve(matrix.size());
  for (const auto& row : matrix) out.push_back(minmax_mean(row));
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (double(i) + double(j)) / 2.0 + 1.0;  // 1-based average rank
    for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson_of(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::pair<std::optional<double>, std::optional<double>> correlations(
    const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlations: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("correlations: need at least 3 pairs");
  return {pearson_of(x, y), pearson_of(average_ranks(x), average_ranks(y))};
}

PoolRule parse_pool_rule(const std::string& text, int& fixed_pool) {
  fixed_pool = 0;
  if (text == "log") return PoolRule::Log;
  if (text == "sqrt") return PoolRule::Sqrt;
  if (text == "linear") return PoolRule::Linear;
  if (text.rfind("fixed:", 0) == 0) {
    fixed_pool = std::stoi(text.substr(6));
    if (fixed_pool < 1) throw std::invalid_argument("pool rule: fixed size must be >= 1");
    return PoolRule::Fixed;
  }
  throw std::invalid_argument("unknown pool rule: " + text);
}

std::string pool_rule_name(PoolRule rule, int fixed_pool) {
  switch (rule) {
    case PoolRule::Log: return "log";
    case PoolRule::Sqrt: return "sqrt";
    case PoolRule::Linear: return "linear";
    case PoolRule::Fixed: return "fixed:" + std::to_string(fixed_pool);
  }
  return "log";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

void run_parallel(std::size_t total, int threads, const std::function<void(std::size_t)>& work) {
  int t = threads > 0 ? threads : int(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  t = int(std::min<std::size_t>(std::size_t(t), std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(t));
  for (int i = 0; i < t; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// EGD-EGC ranks its final pass by phi_COM; every other k-means method ranks
// (or implicitly samples) by distances to the seeds themselves.
bool seeding_metric_is_com(std::string_view method) { return method == "EGD-EGC"; }

void validate_config(const BenchConfig& config) {
  if (config.datasets.empty()) throw std::invalid_argument("bench: no datasets");
  if (config.methods.empty()) throw std::invalid_argument("bench: no methods");
  if (config.repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
}

BenchReport aggregate(BenchReport report, const BenchConfig& config) {
  const std::size_t nd = report.datasets.size();
  const std::size_t nm = report.methods.size();
  const std::size_t R = std::size_t(config.repeats);

  std::vector<std::vector<double>> mean_obj(nd, std::vector<double>(nm, 0.0));
  std::vector<std::vector<double>> mean_seed_time(nd, std::vector<double>(nm, 0.0));
  std::vector<std::vector<double>> mean_total_time(nd, std::vector<double>(nm, 0.0));

  for (std::size_t di = 0; di < nd; ++di) {
    std::vector<double> all_values;
    all_values.reserve(nm * R);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      CellStats cell;
      cell.dataset = report.datasets[di];
      cell.method = report.methods[mi];
      std::vector<double> xs, ys;
      xs.reserve(R);
      ys.reserve(R);
      for (std::size_t r = 0; r < R; ++r) {
        const auto& rec = report.records[(di * nm + mi) * R + r];
        cell.mean_objective += rec.objective;
        cell.mean_seeding_objective += rec.seeding_objective;
        cell.mean_iterations += rec.iterations;
        cell.mean_seeding_seconds += rec.seeding_seconds;
        cell.mean_total_seconds += rec.total_seconds;
        xs.push_back(rec.seeding_objective);
        ys.push_back(rec.objective);
        all_values.push_back(rec.objective);
      }
      cell.mean_objective /= double(R);
      cell.mean_seeding_objective /= double(R);
      cell.mean_iterations /= double(R);
      cell.mean_seeding_seconds /= double(R);
      cell.mean_total_seconds /= double(R);
      if (R >= 3) {
        auto [p, s] = correlations(xs, ys);
        cell.pearson = p;
        cell.spearman = s;
      }
      mean_obj[di][mi] = cell.mean_objective;
      mean_seed_time[di][mi] = cell.mean_seeding_seconds;
      mean_total_time[di][mi] = cell.mean_total_seconds;
      report.cells.push_back(std::move(cell));
    }
    report.mm_mean.push_back(minmax_mean(mean_obj[di]));
    report.mm_global.push_back(minmax_global(all_values, mean_obj[di]));
    report.mm_mean_seeding_time.push_back(minmax_mean(mean_seed_time[di]));
    report.mm_mean_total_time.push_back(minmax_mean(mean_total_time[di]));
  }

  if (report.kind == "gmm") {
    report.ll_row_normalized = loglik_row_normalize(mean_obj);
    for (std::size_t di = 0; di < nd; ++di) {
      const std::string& g = report.dataset_groups[di];
      if (g.empty()) continue;
      if (std::find(report.group_names.begin(), report.group_names.end(), g) ==
          report.group_names.end())
        report.group_names.push_back(g);
    }
    for (const auto& g : report.group_names) {
      std::vector<double> col_means(nm, 0.0);
      std::size_t rows = 0;
      for (std::size_t di = 0; di < nd; ++di) {
        if (report.dataset_groups[di] != g) continue;
        ++rows;
        for (std::size_t mi = 0; mi < nm; ++mi)
          col_means[mi] += report.ll_row_normalized[di][mi];
      }
      for (auto& v : col_means) v /= double(rows);
      report.group_means.push_back(std::move(col_means));
    }
  }
  return report;
}

BenchReport make_report_shell(const BenchConfig& config, const std::string& kind) {
  BenchReport report;
  report.kind = kind;
  report.master_seed = config.master_seed;
  report.repeats = config.repeats;
  report.pool_rule = pool_rule_name(config.pool_rule, config.fixed_pool);
  for (const auto& ds : config.datasets) {
    report.datasets.push_back(ds.id);
    report.dataset_groups.push_back(ds.group);
  }
  report.methods = config.methods;
  report.records.resize(report.datasets.size() * report.methods.size() *
                        std::size_t(config.repeats));
  return report;
}

}  // namespace

BenchReport run_kmeans_bench(const BenchConfig& config) {
  validate_config(config);
  BenchReport report = make_report_shell(config, "kmeans");
  const std::size_t nm = config.methods.size();
  const std::size_t R = std::size_t(config.repeats);

  run_parallel(report.records.size(), config.threads, [&](std::size_t t) {
    const std::size_t r = t % R;
    const std::size_t mi = (t / R) % nm;
    const std::size_t di = t / (R * nm);
    const auto& ds = config.datasets[di];
    const std::string& method = config.methods[mi];

    RunRecord rec;
    rec.dataset = ds.id;
    rec.group = ds.group;
    rec.method = method;
    rec.repeat = int(r);
    rec.stream = run_stream_id(ds.id, method, r);
    RngStream rng(config.master_seed, rec.stream);

    const auto t0 = Clock::now();
    const SeedSet seeds = run_kmeans_method(ds.points, ds.k, method, config.pool_rule,
                                            config.fixed_pool, rng);
    const auto t1 = Clock::now();
    rec.seeding_objective = seeding_metric_is_com(method)
                                ? sse_com(ds.points, seeds)
                                : sse(ds.points, gather_rows(ds.points, seeds));
    const LloydResult res = lloyd(ds.points, gather_rows(ds.points, seeds),
                                  config.lloyd_tol, config.lloyd_max_iter);
    const auto t2 = Clock::now();

    rec.objective = res.sse;
    rec.iterations = res.iterations;
    rec.seeding_seconds = seconds_between(t0, t1);
    rec.total_seconds = seconds_between(t0, t2);
    report.records[t] = std::move(rec);
  });

  return aggregate(std::move(report), config);
}

BenchReport run_gmm_bench(const BenchConfig& config) {
  validate_config(config);
  BenchReport report = make_report_shell(config, "gmm");
  const std::size_t nm = config.methods.size();
  const std::size_t R = std::size_t(config.repeats);

  run_parallel(report.records.size(), config.threads, [&](std::size_t t) {
    const std::size_t r = t % R;
    const std::size_t mi = (t / R) % nm;
    const std::size_t di = t / (R * nm);
    const auto& ds = config.datasets[di];
    const std::string& method = config.methods[mi];

    RunRecord rec;
    rec.dataset = ds.id;
    rec.group = ds.group;
    rec.method = method;
    rec.repeat = int(r);
    rec.stream = run_stream_id(ds.id, method, r);
    RngStream rng(config.master_seed, rec.stream);

    const auto plan = gmm_plan_preset(method, config.pool_rule, config.fixed_pool);
    const auto t0 = Clock::now();
    const GmmSeedResult sr = seed_gmm(ds.points, ds.k, plan, rng);
    const auto t1 = Clock::now();
    rec.seeding_objective = mixture_loglik(sr.init, ds.points);
    const EmResult res = em(ds.points, sr.init, config.em_tol, config.em_max_iter);
    const auto t2 = Clock::now();

    rec.objective = res.loglik;
    rec.iterations = res.iterations;
    rec.seeding_seconds = seconds_between(t0, t1);
    rec.total_seconds = seconds_between(t0, t2);
    report.records[t] = std::move(rec);
  });

  return aggregate(std::move(report), config);
}

namespace {

json matrix_to_json(const std::vector<std::vector<double>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

json opt_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const BenchReport& report) {
  json j;
  j["kind"] = report.kind;
  j["master_seed"] = report.master_seed;
  j["repeats"] = report.repeats;
  j["pool_rule"] = report.pool_rule;
  j["methods"] = report.methods;
  j["datasets"] = json::array();
  for (std::size_t i = 0; i < report.datasets.size(); ++i) {
    json d;
    d["id"] = report.datasets[i];
    d["group"] = report.dataset_groups[i];
    j["datasets"].push_back(std::move(d));
  }
  j["objective"] = report.kind == "gmm" ? "loglik (larger is better)" : "sse (smaller is better)";
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell;
    cell["dataset"] = c.dataset;
    cell["method"] = c.method;
    cell["mean_objective"] = c.mean_objective;
    cell["mean_seeding_objective"] = c.mean_seeding_objective;
    cell["mean_iterations"] = c.mean_iterations;
    cell["pearson_seed_vs_final"] = opt_to_json(c.pearson);
    cell["spearman_seed_vs_final"] = opt_to_json(c.spearman);
    j["cells"].push_back(std::move(cell));
  }
  j["mm_mean"] = matrix_to_json(report.mm_mean);
  j["mm_global"] = matrix_to_json(report.mm_global);
  if (report.kind == "gmm") {
    j["ll_row_normalized"] = matrix_to_json(report.ll_row_normalized);
    j["groups"] = json::object();
    j["groups"]["names"] = report.group_names;
    j["groups"]["means"] = matrix_to_json(report.group_means);
  }
  return j.dump(2) + "\n";
}

std::string timings_to_json(const BenchReport& report) {
  json j;
  j["kind"] = report.kind;
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell;
    cell["dataset"] = c.dataset;
    cell["method"] = c.method;
    cell["mean_seeding_seconds"] = c.mean_seeding_seconds;
    cell["mean_total_seconds"] = c.mean_total_seconds;
    j["cells"].push_back(std::move(cell));
  }
  j["mm_mean_seeding_time"] = matrix_to_json(report.mm_mean_seeding_time);
  j["mm_mean_total_time"] = matrix_to_json(report.mm_mean_total_time);
  return j.dump(2) + "\n";
}

std::string records_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "# kind=" << report.kind << " master_seed=" << report.master_seed
      << " repeats=" << report.repeats << " pool_rule=" << report.pool_rule << "\n";
  out << "dataset,group,method,repeat,objective,seeding_objective,iterations,"
         "seeding_seconds,total_seconds,stream\n";
  for (const auto& r : report.records) {
    out << r.dataset << ',' << r.group << ',' << r.method << ',' << r.repeat << ','
        << format_double(r.objective) << ',' << format_double(r.seeding_objective) << ','
        << r.iterations << ',' << format_double(r.seeding_seconds) << ','
        << format_double(r.total_seconds) << ',' << r.stream << "\n";
  }
  return out.str();
}

BenchReport report_from_records_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# kind=", 0) != 0)
    throw std::runtime_error("records csv: missing metadata comment line");

  BenchReport report;
  {
    std::istringstream meta(line.substr(2));
    std::string tok;
    while (meta >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "kind") report.kind = value;
      else if (key == "master_seed") report.master_seed = std::stoull(value);
      else if (key == "repeats") report.repeats = std::stoi(value);
      else if (key == "pool_rule") report.pool_rule = value;
    }
  }
  if (!std::getline(in, line)) throw std::runtime_error("records csv: missing header");

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw std::runtime_error("records csv: malformed row: " + line);
    RunRecord r;
    r.dataset = fields[0];
    r.group = fields[1];
    r.method = fields[2];
    r.repeat = std::stoi(fields[3]);
    r.objective = std::stod(fields[4]);
    r.seeding_objective = std::stod(fields[5]);
    r.iterations = std::stoi(fields[6]);
    r.seeding_seconds = std::stod(fields[7]);
    r.total_seconds = std::stod(fields[8]);
    r.stream = std::stoull(fields[9]);
    records.push_back(std::move(r));
  }

  // Recover dataset/method orderings from first appearance.
  for (const auto& r : records) {
    if (std::find(report.datasets.begin(), report.datasets.end(), r.dataset) ==
        report.datasets.end()) {
      report.datasets.push_back(r.dataset);
      report.dataset_groups.push_back(r.group);
    }
    if (std::find(report.methods.begin(), report.methods.end(), r.method) ==
        report.methods.end())
      report.methods.push_back(r.method);
  }
  const std::size_t nm = report.methods.size();
  const std::size_t R = std::size_t(report.repeats);
  if (records.size() != report.datasets.size() * nm * R)
    throw std::runtime_error("records csv: record count does not match repeats grid");

  report.records.resize(records.size());
  for (auto& r : records) {
    const std::size_t di = std::size_t(std::find(report.datasets.begin(), report.datasets.end(),
                                                 r.dataset) -
                                       report.datasets.begin());
    const std::size_t mi = std::size_t(std::find(report.methods.begin(), report.methods.end(),
                                                 r.method) -
                                       report.methods.begin());
    const std::size_t slot = (di * nm + mi) * R + std::size_t(r.repeat);
    report.records[slot] = std::move(r);
  }

  BenchConfig shim;
  shim.repeats = report.repeats;
  BenchReport out = std::move(report);
  return aggregate(std::move(out), shim);
}

}  // namespace seedkit
