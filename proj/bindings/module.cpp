#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seedkit/bench.hpp"
#include "seedkit/datagen.hpp"
#include "seedkit/dataset.hpp"
#include "seedkit/gmm.hpp"
#include "seedkit/gmm_seeding.hpp"
#include "seedkit/kmeans.hpp"
#include "seedkit/seeding.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace seedkit;

namespace {

PointSet as_points(const Eigen::Ref<const Matrix>& pts) { return PointSet(Matrix(pts)); }

PoolRule rule_of(const std::string& name, int& fixed) { return parse_pool_rule(name, fixed); }

Mixture make_mixture(const Vector& weights, const std::vector<Vector>& means,
                     const std::vector<Matrix>& covs) {
  if (means.size() != covs.size() || Index(means.size()) != weights.size())
    throw std::invalid_argument("Mixture: inconsistent component counts");
  Mixture m;
  m.weights = weights;
  for (std::size_t k = 0; k < means.size(); ++k) m.components.push_back(Gauss{means[k], covs[k]});
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "k-means / GMM seeding library: multipass zig-zag reselection, "
            "lookahead ranking, Gaussian-distance D2 sampling, Lloyd and EM.";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), "seed"_a, "stream"_a = 0)
      .def("next_double", &RngStream::next_double)
      .def("next_normal", &RngStream::next_normal)
      .def("below", &RngStream::below, "bound"_a)
      .def("split", &RngStream::split, "tag"_a);

  py::class_<Mixture>(m, "Mixture")
      .def(py::init(&make_mixture), "weights"_a, "means"_a, "covs"_a)
      .def_property_readonly("weights", [](const Mixture& mx) { return mx.weights; })
      .def_property_readonly("means",
                             [](const Mixture& mx) {
                               std::vector<Vector> out;
                               for (const auto& g : mx.components) out.push_back(g.mean);
                               return out;
                             })
      .def_property_readonly("covs",
                             [](const Mixture& mx) {
                               std::vector<Matrix> out;
                               for (const auto& g : mx.components) out.push_back(g.cov);
                               return out;
                             })
      .def_property_readonly("k", &Mixture::K)
      .def("to_json", &mixture_to_json)
      .def_static("from_json", &mixture_from_json, "text"_a);

  // dataset
  m.def("load_csv",
        [](const std::string& path, char delimiter, bool header, std::vector<Index> drop) {
          CsvOptions opts;
          opts.delimiter = delimiter;
          opts.header = header;
          opts.drop_columns = std::move(drop);
          return load_csv(path, opts).points;
        },
        "path"_a, "delimiter"_a = ',', "header"_a = false,
        "drop_columns"_a = std::vector<Index>{});
  m.def("minmax_normalize",
        [](const Eigen::Ref<const Matrix>& pts) { return minmax_normalize(as_points(pts)).points; },
        "points"_a);
  m.def("knn",
        [](const Eigen::Ref<const Matrix>& pts, Index i, Index L) {
          return knn(as_points(pts), i, L);
        },
        "points"_a, "i"_a, "L"_a);

  // k-means core
  m.def("assign",
        [](const Eigen::Ref<const Matrix>& pts, const Eigen::Ref<const Matrix>& centers) {
          return assign(as_points(pts), centers);
        },
        "points"_a, "centers"_a);
  m.def("centroids",
        [](const Eigen::Ref<const Matrix>& pts, const std::vector<int>& labels, int k) {
          return centroids(as_points(pts), labels, k);
        },
        "points"_a, "labels"_a, "k"_a);
  m.def("sse",
        [](const Eigen::Ref<const Matrix>& pts, const Eigen::Ref<const Matrix>& centers) {
          return sse(as_points(pts), centers);
        },
        "points"_a, "centers"_a);
  m.def("sse_com",
        [](const Eigen::Ref<const Matrix>& pts, const SeedSet& seeds) {
          return sse_com(as_points(pts), seeds);
        },
        "points"_a, "seeds"_a);
  m.def("lloyd",
        [](const Eigen::Ref<const Matrix>& pts, const Eigen::Ref<const Matrix>& init, double tol,
           int max_iter) {
          const auto res = lloyd(as_points(pts), Matrix(init), tol, max_iter);
          return py::make_tuple(res.centers, res.labels, res.sse, res.iterations);
        },
        "points"_a, "init"_a, "tol"_a = 1e-4, "max_iter"_a = 50,
        "Returns (centers, labels, sse, iterations).");

  // k-means seeding
  m.def("d2_weights",
        [](const Eigen::Ref<const Matrix>& pts, const SeedSet& seeds) {
          return d2_weights(as_points(pts), seeds);
        },
        "points"_a, "seeds"_a);
  m.def("sample_d2", &sample_d2, "weights"_a, "rng"_a);
  m.def("kmeans_seed",
        [](const Eigen::Ref<const Matrix>& pts, int k, const std::string& method, RngStream& rng,
           const std::string& pool_rule) {
          int fixed = 0;
          const PoolRule rule = rule_of(pool_rule, fixed);
          return run_kmeans_method(as_points(pts), k, method, rule, fixed, rng);
        },
        "points"_a, "k"_a, "method"_a, "rng"_a, "pool_rule"_a = "log");
  m.def("local_search_pp",
        [](const Eigen::Ref<const Matrix>& pts, SeedSet seeds, int Z, RngStream& rng) {
          return local_search_pp(as_points(pts), std::move(seeds), Z, rng);
        },
        "points"_a, "seeds"_a, "Z"_a, "rng"_a);
  m.def("multiswap_greedy",
        [](const Eigen::Ref<const Matrix>& pts, SeedSet seeds, int Z, int p, RngStream& rng,
           bool revert_on_increase) {
          return multiswap_greedy(as_points(pts), std::move(seeds), Z, p, rng, revert_on_increase);
        },
        "points"_a, "seeds"_a, "Z"_a, "p"_a, "rng"_a, "revert_on_increase"_a = true);
  m.def("kmeans_methods", [] { return kmeans_method_names(); });

  // gmm core
  m.def("logsumexp", [](const std::vector<double>& v) { return logsumexp(v); }, "values"_a);
  m.def("log_pdf",
        [](const Vector& mean, const Eigen::Ref<const Matrix>& cov, const Vector& x) {
          return log_pdf(Gauss{mean, Matrix(cov)}, x);
        },
        "mean"_a, "cov"_a, "x"_a);
  m.def("mixture_loglik",
        [](const Mixture& mx, const Eigen::Ref<const Matrix>& pts) {
          return mixture_loglik(mx, as_points(pts));
        },
        "mixture"_a, "points"_a);
  m.def("e_step",
        [](const Mixture& mx, const Eigen::Ref<const Matrix>& pts) {
          return e_step(mx, as_points(pts));
        },
        "mixture"_a, "points"_a);
  m.def("m_step",
        [](const Eigen::Ref<const Matrix>& pts, const Eigen::Ref<const Matrix>& log_resp) {
          return m_step(as_points(pts), Matrix(log_resp));
        },
        "points"_a, "log_resp"_a);
  m.def("em",
        [](const Eigen::Ref<const Matrix>& pts, const Mixture& init, double tol, int max_iter) {
          const auto res = em(as_points(pts), init, tol, max_iter);
          return py::make_tuple(res.mixture, res.loglik, res.iterations);
        },
        "points"_a, "init"_a, "tol"_a = 1e-4, "max_iter"_a = 100,
        "Returns (mixture, loglik, iterations).");
  m.def("means_to_gmm",
        [](const Eigen::Ref<const Matrix>& pts, const Eigen::Ref<const Matrix>& means,
           bool spherical) {
          return means_to_gmm(as_points(pts), Matrix(means),
                              spherical ? CovMode::Spherical : CovMode::Aniso);
        },
        "points"_a, "means"_a, "spherical"_a = true);

  // gmm seeding
  m.def("gauss_distance",
        [](const Vector& mean1, const Eigen::Ref<const Matrix>& cov1, const Vector& mean2,
           const Eigen::Ref<const Matrix>& cov2) {
          return gauss_distance(Gauss{mean1, Matrix(cov1)}, Gauss{mean2, Matrix(cov2)});
        },
        "mean1"_a, "cov1"_a, "mean2"_a, "cov2"_a);
  m.def("adaptive_weights",
        [](const Eigen::Ref<const Matrix>& pts, const Mixture& current, double alpha) {
          return adaptive_weights(as_points(pts), current, alpha);
        },
        "points"_a, "mixture"_a, "alpha"_a = 0.5);
  m.def("gmm_seed",
        [](const Eigen::Ref<const Matrix>& pts, int k, const std::string& method, RngStream& rng,
           const std::string& pool_rule) {
          int fixed = 0;
          const PoolRule rule = rule_of(pool_rule, fixed);
          const auto res = seed_gmm(as_points(pts), k, gmm_plan_preset(method, rule, fixed), rng);
          return py::make_tuple(res.seeds, res.init);
        },
        "points"_a, "k"_a, "method"_a, "rng"_a, "pool_rule"_a = "log",
        "Returns (seed_indices, initial_mixture).");
  m.def("gmm_methods", [] { return gmm_method_names(); });

  // datagen
  m.def("generate_model",
        [](int K, int d, double separation, double eccentricity, const std::string& weights,
           const std::string& sizes, RngStream& rng) {
          ModelSpec spec;
          spec.K = K;
          spec.d = d;
          spec.separation = separation;
          spec.eccentricity = eccentricity;
          spec.weights = weights == "different" ? WeightMode::Different : WeightMode::Uniform;
          spec.sizes = sizes == "different" ? SizeMode::Different : SizeMode::Constant;
          return generate_model(spec, rng);
        },
        "K"_a, "d"_a, "separation"_a = 1.0, "eccentricity"_a = 1.0, "weights"_a = "uniform",
        "sizes"_a = "constant", "rng"_a);
  m.def("sample_dataset",
        [](const Mixture& mx, Index n, RngStream& rng) {
          auto res = sample_dataset(mx, n, rng);
          return py::make_tuple(res.points.points, res.labels);
        },
        "mixture"_a, "n"_a, "rng"_a, "Returns (points, labels).");
  m.def("add_noise",
        [](const Eigen::Ref<const Matrix>& pts, Index clean_count, Index noise_count,
           double expansion, RngStream& rng) {
          return add_noise(as_points(pts), clean_count, noise_count, expansion, rng).points;
        },
        "points"_a, "clean_count"_a, "noise_count"_a, "expansion"_a = 0.2, "rng"_a);
  m.def("grid_model", &grid_model);

  // bench statistics
  m.def("minmax_mean", &minmax_mean, "means"_a);
  m.def("minmax_global", &minmax_global, "all_values"_a, "means"_a);
  m.def("loglik_row_normalize", &loglik_row_normalize, "matrix"_a);
  m.def("correlations",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          const auto [p, s] = correlations(x, y);
          return py::make_tuple(p, s);
        },
        "x"_a, "y"_a, "Returns (pearson, spearman); entries are None on zero variance.");

#ifdef VERSION_INFO
#define SEEDKIT_STR_(x) #x
#define SEEDKIT_STR(x) SEEDKIT_STR_(x)
  m.attr("__version__") = SEEDKIT_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
