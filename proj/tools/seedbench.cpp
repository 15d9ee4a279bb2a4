// seedbench: benchmark CLI for the seeding library.
//
//   seedbench kmeans --data points.csv --k 10 --methods EON,EGD-EGC ...
//   seedbench gmm    --gen corpus.json --methods EGD,EGD-EGC ...
//   seedbench gen    --config corpus.json --outdir data/
//   seedbench report --runs out.runs.csv --out rebuilt
//
// kmeans/gmm write three files: <out>.json (deterministic report),
// <out>.timings.json (wall-clock side channel) and <out>.runs.csv (flat
// per-run records).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seedkit/bench.hpp"
#include "seedkit/datagen.hpp"
#include "seedkit/dataset.hpp"
#include "seedkit/gmm.hpp"
#include "seedkit/gmm_seeding.hpp"

namespace fs = std::filesystem;
using namespace seedkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

std::vector<std::string> split_list(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, delim))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Shared flags of the kmeans and gmm subcommands.
struct RunArgs {
  std::vector<std::string> data_files;
  std::string gen_config;
  std::string config_file;
  int k = 0;
  std::string methods;
  int repeats = 10;
  std::string pool_rule = "log";
  std::uint64_t seed = 0;
  std::string out = "report";
  int threads = 0;
  bool normalize = false;
  bool csv_header = false;
  std::string csv_delim = ",";
  std::string drop_cols;
  std::string groups;
};

void add_run_options(CLI::App* cmd, RunArgs& args, bool kmeans) {
  cmd->add_option("--data", args.data_files, "CSV dataset file(s)");
  cmd->add_option("--gen", args.gen_config, "generation config JSON (datasets built in memory)");
  cmd->add_option("--config", args.config_file, "JSON config mirroring these flags");
  cmd->add_option("--k", args.k, "cluster/component count for --data files");
  cmd->add_option("--methods", args.methods, "comma-separated seeding method names");
  cmd->add_option("--repeats", args.repeats, "repeats per (dataset, method)");
  cmd->add_option("--pool-rule", args.pool_rule, "candidate pool rule: log|sqrt|linear|fixed:N");
  cmd->add_option("--seed", args.seed, "master RNG seed");
  cmd->add_option("--out", args.out, "output prefix");
  cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--normalize,!--no-normalize", args.normalize,
                "min-max normalize coordinates per dataset");
  cmd->add_option("--csv-delim", args.csv_delim, "CSV delimiter for --data files");
  cmd->add_flag("--csv-header", args.csv_header, "--data files start with a header row");
  cmd->add_option("--drop-cols", args.drop_cols, "comma-separated column indices to drop");
  if (!kmeans)
    cmd->add_option("--groups", args.groups,
                    "dataset groups, e.g. 'spherical:a.csv,b.csv;noisy:c.csv'");
  args.normalize = kmeans;  // paper protocol: normalize for k-means only
}

// Config-file values fill every flag the user did not pass on the CLI.
void merge_config(CLI::App* cmd, RunArgs& args) {
  if (args.config_file.empty()) return;
  const auto j = nlohmann::json::parse(slurp(args.config_file));
  const auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (!given("--data") && j.contains("data")) args.data_files = j["data"].get<std::vector<std::string>>();
  if (!given("--gen") && j.contains("gen")) args.gen_config = j["gen"].get<std::string>();
  if (!given("--k") && j.contains("k")) args.k = j["k"].get<int>();
  if (!given("--methods") && j.contains("methods")) {
    if (j["methods"].is_array()) {
      std::string joined;
      for (const auto& m : j["methods"]) joined += (joined.empty() ? "" : ",") + m.get<std::string>();
      args.methods = joined;
    } else {
      args.methods = j["methods"].get<std::string>();
    }
  }
  if (!given("--repeats") && j.contains("repeats")) args.repeats = j["repeats"].get<int>();
  if (!given("--pool-rule") && j.contains("pool_rule")) args.pool_rule = j["pool_rule"].get<std::string>();
  if (!given("--seed") && j.contains("seed")) args.seed = j["seed"].get<std::uint64_t>();
  if (!given("--out") && j.contains("out")) args.out = j["out"].get<std::string>();
  if (!given("--threads") && j.contains("threads")) args.threads = j["threads"].get<int>();
  if (!cmd->count("--normalize") && !cmd->count("--no-normalize") && j.contains("normalize"))
    args.normalize = j["normalize"].get<bool>();
  if (!given("--csv-delim") && j.contains("csv_delim")) args.csv_delim = j["csv_delim"].get<std::string>();
  if (!given("--csv-header") && j.contains("csv_header")) args.csv_header = j["csv_header"].get<bool>();
  if (!given("--drop-cols") && j.contains("drop_cols")) args.drop_cols = j["drop_cols"].get<std::string>();
  if (!given("--groups") && j.contains("groups")) args.groups = j["groups"].get<std::string>();
}

std::string dataset_id_from_path(const std::string& path) {
  return fs::path(path).stem().string();
}

BenchConfig build_bench_config(const RunArgs& args) {
  BenchConfig config;
  config.repeats = args.repeats;
  config.master_seed = args.seed;
  config.threads = args.threads;
  config.pool_rule = parse_pool_rule(args.pool_rule, config.fixed_pool);
  config.methods = split_list(args.methods, ',');
  if (config.methods.empty()) throw std::runtime_error("no methods given (--methods)");

  // group name per dataset id, parsed from "g1:id1,id2;g2:id3".
  std::map<std::string, std::string> group_of;
  for (const auto& part : split_list(args.groups, ';')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad --groups syntax: " + part);
    const std::string g = part.substr(0, colon);
    for (const auto& id : split_list(part.substr(colon + 1), ','))
      group_of[dataset_id_from_path(id)] = g;
  }

  if (!args.data_files.empty()) {
    if (args.k < 1) throw std::runtime_error("--data requires --k");
    CsvOptions opts;
    if (args.csv_delim.size() != 1) throw std::runtime_error("--csv-delim must be one character");
    opts.delimiter = args.csv_delim[0];
    opts.header = args.csv_header;
    for (const auto& c : split_list(args.drop_cols, ','))
      opts.drop_columns.push_back(Index(std::stol(c)));
    for (const auto& path : args.data_files) {
      BenchDataset ds;
      ds.id = dataset_id_from_path(path);
      ds.points = load_csv(path, opts);
      ds.k = args.k;
      if (auto it = group_of.find(ds.id); it != group_of.end()) ds.group = it->second;
      config.datasets.push_back(std::move(ds));
    }
  }
  if (!args.gen_config.empty()) {
    const auto corpus = generate_corpus(parse_gen_config(slurp(args.gen_config)));
    for (auto& g : corpus.datasets) {
      BenchDataset ds;
      ds.id = g.id;
      ds.group = g.group;
      ds.points = g.points;
      ds.k = g.k;
      config.datasets.push_back(std::move(ds));
    }
  }
  if (config.datasets.empty()) throw std::runtime_error("no datasets given (--data or --gen)");

  if (args.normalize)
    for (auto& ds : config.datasets) ds.points = minmax_normalize(ds.points);
  return config;
}

void write_outputs(const BenchReport& report, const std::string& out_prefix) {
  spit(out_prefix + ".json", report_to_json(report));
  spit(out_prefix + ".timings.json", timings_to_json(report));
  spit(out_prefix + ".runs.csv", records_to_csv(report));
  std::cout << "wrote " << out_prefix << ".json, .timings.json, .runs.csv\n";
}

void print_summary(const BenchReport& report) {
  std::cout << report.kind << " benchmark: " << report.datasets.size() << " dataset(s), "
            << report.methods.size() << " method(s), R=" << report.repeats << "\n";
  for (const auto& c : report.cells) {
    std::cout << "  " << c.dataset << " / " << c.method << ": mean objective " << c.mean_objective
              << ", mean iterations " << c.mean_iterations << "\n";
  }
}

int run_bench(const RunArgs& args, bool kmeans) {
  const BenchConfig config = build_bench_config(args);
  const BenchReport report = kmeans ? run_kmeans_bench(config) : run_gmm_bench(config);
  print_summary(report);
  write_outputs(report, args.out);
  return 0;
}

int run_gen(const std::string& config_path, const std::string& outdir) {
  const GenConfig config = parse_gen_config(slurp(config_path));
  const GeneratedCorpus corpus = generate_corpus(config);
  fs::create_directories(outdir);

  nlohmann::ordered_json manifest;
  manifest["datasets"] = nlohmann::ordered_json::array();
  for (const auto& ds : corpus.datasets) {
    const std::string file = ds.id + ".csv";
    spit(fs::path(outdir) / file, to_csv(ds.points));
    nlohmann::ordered_json entry;
    entry["id"] = ds.id;
    entry["file"] = file;
    entry["k"] = ds.k;
    entry["group"] = ds.group;
    entry["model"] = ds.model_name;
    manifest["datasets"].push_back(std::move(entry));
  }
  for (const auto& [name, model] : corpus.models)
    spit(fs::path(outdir) / (name + ".model.json"), mixture_to_json(model));
  spit(fs::path(outdir) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << corpus.datasets.size() << " dataset(s) and "
            << corpus.models.size() << " model file(s) to " << outdir << "\n";
  return 0;
}

int run_report(const std::string& runs_path, const std::string& out_prefix) {
  const BenchReport report = report_from_records_csv(slurp(runs_path));
  print_summary(report);
  write_outputs(report, out_prefix);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeding benchmark for k-means and GMM fitting"};
  app.require_subcommand(1);

  RunArgs kmeans_args, gmm_args;
  auto* kmeans_cmd = app.add_subcommand("kmeans", "seed + Lloyd benchmark");
  add_run_options(kmeans_cmd, kmeans_args, true);
  auto* gmm_cmd = app.add_subcommand("gmm", "seed + EM benchmark");
  add_run_options(gmm_cmd, gmm_args, false);

  std::string gen_config, gen_outdir = "datasets";
  auto* gen_cmd = app.add_subcommand("gen", "generate synthetic dataset files");
  gen_cmd->add_option("--config", gen_config, "generation config JSON")->required();
  gen_cmd->add_option("--outdir", gen_outdir, "output directory");

  std::string report_runs, report_out = "report";
  auto* report_cmd = app.add_subcommand("report", "re-aggregate stored run records");
  report_cmd->add_option("--runs", report_runs, "runs CSV produced by kmeans/gmm")->required();
  report_cmd->add_option("--out", report_out, "output prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kmeans_cmd->parsed()) {
      merge_config(kmeans_cmd, kmeans_args);
      return run_bench(kmeans_args, true);
    }
    if (gmm_cmd->parsed()) {
      merge_config(gmm_cmd, gmm_args);
      return run_bench(gmm_args, false);
    }
    if (gen_cmd->parsed()) return run_gen(gen_config, gen_outdir);
    if (report_cmd->parsed()) return run_report(report_runs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
