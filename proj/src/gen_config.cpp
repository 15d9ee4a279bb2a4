#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "seedkit/datagen.hpp"

namespace seedkit {

namespace {

WeightMode parse_weight_mode(const std::string& s) {
  if (s == "uniform") return WeightMode::Uniform;
  if (s == "different") return WeightMode::Different;
  throw std::invalid_argument("gen config: unknown weight mode: " + s);
}

SizeMode parse_size_mode(const std::string& s) {
  if (s == "constant") return SizeMode::Constant;
  if (s == "different") return SizeMode::Different;
  throw std::invalid_argument("gen config: unknown size mode: " + s);
}

}  // namespace

GenConfig parse_gen_config(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  GenConfig config;
  config.seed = j.value("seed", std::uint64_t(0));
  config.datasets_per_model = j.value("datasets_per_model", 1);
  config.points_per_dataset = j.value("points_per_dataset", Index(1000));
  if (j.contains("noise")) {
    config.noise_fraction = j["noise"].value("fraction", 0.1);
    config.noise_expansion = j["noise"].value("expansion", 0.2);
  }
  if (!j.contains("models") || !j["models"].is_array() || j["models"].empty())
    throw std::invalid_argument("gen config: 'models' must be a non-empty array");
  for (const auto& m : j["models"]) {
    GenModelEntry entry;
    entry.name = m.at("name").get<std::string>();
    entry.group = m.value("group", std::string());
    entry.noisy = m.value("noisy", false);
    entry.n = m.value("n", Index(0));
    const std::string type = m.value("type", std::string("gmm"));
    if (type == "grid") {
      entry.grid = true;
      entry.spec.K = 27;
      entry.spec.d = 3;
    } else if (type == "gmm") {
      entry.spec.K = m.at("K").get<int>();
      entry.spec.d = m.at("d").get<int>();
      entry.spec.separation = m.value("separation", 1.0);
      entry.spec.eccentricity = m.value("eccentricity", 1.0);
      entry.spec.weights = parse_weight_mode(m.value("weights", std::string("uniform")));
      entry.spec.sizes = parse_size_mode(m.value("sizes", std::string("constant")));
    } else {
      throw std::invalid_argument("gen config: unknown model type: " + type);
    }
    config.models.push_back(std::move(entry));
  }
  return config;
}

GeneratedCorpus generate_corpus(const GenConfig& config) {
  GeneratedCorpus corpus;
  for (const auto& entry : config.models) {
    Mixture model;
    if (entry.grid) {
      model = grid_model();
    } else {
      RngStream model_rng(config.seed, fnv1a64("model:" + entry.name));
      model = generate_model(entry.spec, model_rng);
    }
    corpus.models.emplace_back(entry.name, model);

    const Index n = entry.n > 0 ? entry.n : config.points_per_dataset;
    for (int i = 0; i < config.datasets_per_model; ++i) {
      GeneratedDataset ds;
      ds.id = entry.name + "-" + std::to_string(i);
      ds.group = entry.group;
      ds.model_name = entry.name;
      ds.k = entry.spec.K;
      RngStream data_rng(config.seed, fnv1a64("data:" + ds.id));
      if (entry.noisy) {
        const Index clean = Index(std::llround(double(n) * (1.0 - config.noise_fraction)));
        const Index noise = n - clean;
        auto sampled = sample_dataset(model, clean, data_rng);
        ds.points = add_noise(sampled.points, clean, noise, config.noise_expansion, data_rng);
      } else {
        ds.points = sample_dataset(model, n, data_rng).points;
      }
      corpus.datasets.push_back(std::move(ds));
    }
  }
  return corpus;
}

}  // namespace seedkit
