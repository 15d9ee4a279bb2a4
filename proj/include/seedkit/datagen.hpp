#pragma once

#include <cstdint>
#include <vector>

#include "seedkit/gmm.hpp"
#include "seedkit/rng.hpp"

namespace seedkit {

enum class WeightMode { Uniform, Different };
enum class SizeMode { Constant, Different };

/// Parameters of one synthetic ground-truth mixture.
struct ModelSpec {
  int K = 1;
  int d = 2;
  double separation = 1.0;    // s: pairwise mean separation factor
  WeightMode weights = WeightMode::Uniform;
  SizeMode sizes = SizeMode::Constant;
  double eccentricity = 1.0;  // e = max eigenvalue / min eigenvalue, >= 1
  std::uint64_t seed = 0;
};

/// Random mixture realizing the spec: per component a geometric eigenvalue
/// spectrum spanning the eccentricity, a random rotation, and means placed by
/// rejection so every pair satisfies ||mu_i - mu_j|| >= s * max(sqrt(tr S_i),
/// sqrt(tr S_j)). Throws after a bounded attempt budget when infeasible.
Mixture generate_model(const ModelSpec& spec, RngStream& rng);

struct LabeledPointSet {
  PointSet points;
  std::vector<int> labels;  // generating component per point
};

LabeledPointSet sample_dataset(const Mixture& m, Index n, RngStream& rng);

/// First clean_count rows of ps plus noise_count points drawn uniformly in
/// the bounding box of those rows, each side widened by the expansion factor.
PointSet add_noise(const PointSet& ps, Index clean_count, Index noise_count,
                   double expansion, RngStream& rng);

/// Handcrafted 27-component mixture on the {0,1,2}^3 lattice with elongated
/// covariances whose long axes alternate x/y/z. Deterministic.
Mixture grid_model();

/// One entry of a generation config: a parameterized model or the grid.
struct GenModelEntry {
  std::string name;
  std::string group;
  bool grid = false;
  ModelSpec spec;
  bool noisy = false;
  Index n = 0;  // 0 = inherit points_per_dataset
};

struct GenConfig {
  std::uint64_t seed = 0;
  int datasets_per_model = 1;
  Index points_per_dataset = 1000;
  double noise_fraction = 0.1;
  double noise_expansion = 0.2;
  std::vector<GenModelEntry> models;
};

GenConfig parse_gen_config(const std::string& json_text);

struct GeneratedDataset {
  std::string id;
  std::string group;
  std::string model_name;
  PointSet points;
  int k = 1;
};

struct GeneratedCorpus {
  std::vector<GeneratedDataset> datasets;
  std::vector<std::pair<std::string, Mixture>> models;  // ground truth per model
};

/// Instantiate every model and sample its datasets; fully determined by the
/// config (each model and dataset draws from its own named stream).
GeneratedCorpus generate_corpus(const GenConfig& config);

}  // namespace seedkit
