#include "seedkit/gmm.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "seedkit/kmeans.hpp"
#include "seedkit/numeric.hpp"

namespace seedkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)
constexpr double kMassFloor = 1e-300;

// Cached Cholesky factor of one component for repeated density evaluations.
struct GaussEval {
  Eigen::MatrixXd L;
  double log_det = 0.0;  // ln det(cov)
  Index d = 0;

  static GaussEval make(const Matrix& cov, double jitter_scale = 0.0) {
    Eigen::MatrixXd c = cov;
    if (jitter_scale > 0.0) {
      const double jitter = jitter_scale * c.trace() / double(c.rows());
      c.diagonal().array() += jitter;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("covariance is not positive definite");
    GaussEval ev;
    ev.L = llt.matrixL();
    ev.d = c.rows();
    ev.log_det = 2.0 * ev.L.diagonal().array().log().sum();
    return ev;
  }

  double log_pdf(const Vector& mean, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    Eigen::VectorXd diff = x.transpose() - mean;
    L.triangularView<Eigen::Lower>().solveInPlace(diff);
    return -0.5 * (double(d) * kLog2Pi + log_det + diff.squaredNorm());
  }
};

std::vector<GaussEval> make_evals(const Mixture& m, double jitter_scale) {
  std::vector<GaussEval> evals;
  evals.reserve(m.components.size());
  for (const auto& g : m.components) evals.push_back(GaussEval::make(g.cov, jitter_scale));
  return evals;
}

double mixture_loglik_impl(const Mixture& m, const PointSet& ps, double jitter_scale) {
  const auto evals = make_evals(m, jitter_scale);
  const int K = m.K();
  std::vector<double> comp(static_cast<std::size_t>(K));
  std::vector<double> per_point(static_cast<std::size_t>(ps.n()));
  for (Index i = 0; i < ps.n(); ++i) {
    for (int k = 0; k < K; ++k) {
      comp[std::size_t(k)] =
          std::log(m.weights[k]) + evals[std::size_t(k)].log_pdf(m.components[std::size_t(k)].mean, ps.points.row(i));
    }
    per_point[std::size_t(i)] = logsumexp(comp);
  }
  return pairwise_sum(per_point);
}

Matrix e_step_impl(const Mixture& m, const PointSet& ps, double jitter_scale) {
  const auto evals = make_evals(m, jitter_scale);
  const int K = m.K();
  Matrix lr(ps.n(), K);
  std::vector<double> row(static_cast<std::size_t>(K));
  for (Index i = 0; i < ps.n(); ++i) {
    for (int k = 0; k < K; ++k) {
      row[std::size_t(k)] =
          std::log(m.weights[k]) + evals[std::size_t(k)].log_pdf(m.components[std::size_t(k)].mean, ps.points.row(i));
    }
    const double z = logsumexp(row);
    for (int k = 0; k < K; ++k) lr(i, k) = row[std::size_t(k)] - z;
  }
  return lr;
}

struct MStepOut {
  Mixture mixture;
  std::vector<int> collapsed;  // components whose mass vanished
};

MStepOut m_step_impl(const PointSet& ps, const Matrix& log_resp) {
  const Index n = ps.n();
  const Index d = ps.d();
  const int K = int(log_resp.cols());
  MStepOut out;
  out.mixture.weights = Vector::Zero(K);
  out.mixture.components.resize(std::size_t(K));

  for (int k = 0; k < K; ++k) {
    double mass = 0.0;
    Vector mu = Vector::Zero(d);
    for (Index i = 0; i < n; ++i) {
      const double r = std::exp(log_resp(i, k));
      mass += r;
      mu += r * ps.points.row(i).transpose();
    }
    auto& g = out.mixture.components[std::size_t(k)];
    if (!(mass > kMassFloor)) {
      out.collapsed.push_back(k);
      g.mean = Vector::Zero(d);
      g.cov = Matrix::Identity(d, d);
      continue;
    }
    mu /= mass;
    Matrix cov = Matrix::Zero(d, d);
    for (Index i = 0; i < n; ++i) {
      const double r = std::exp(log_resp(i, k));
      const Vector diff = ps.points.row(i).transpose() - mu;
      cov += r * (diff * diff.transpose());
    }
    cov /= mass;
    g.mean = std::move(mu);
    g.cov = (cov + cov.transpose()) / 2.0;  // enforce exact symmetry
    out.mixture.weights[k] = mass / double(n);
  }
  return out;
}

bool is_pd(const Matrix& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  return llt.info() == Eigen::Success;
}

// Spherical estimate 1/(d |C|) sum ||x - mu||^2 I over an index set.
Matrix spherical_cov(const PointSet& ps, const std::vector<Index>& cluster, const Vector& mu) {
  const Index d = ps.d();
  double s = 0.0;
  for (Index j : cluster) s += (ps.points.row(j).transpose() - mu).squaredNorm();
  const double var = s / (double(d) * double(cluster.size()));
  Matrix cov = Matrix::Identity(d, d) * var;
  return cov;
}

}  // namespace

double log_pdf(const Gauss& g, const Vector& x) {
  const auto ev = GaussEval::make(g.cov);
  return ev.log_pdf(g.mean, x.transpose());
}

double logsumexp(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("logsumexp: empty input");
  double mx = -kInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == -kInf) return -kInf;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

double mixture_loglik(const Mixture& m, const PointSet& ps) {
  return mixture_loglik_impl(m, ps, 0.0);
}

Matrix e_step(const Mixture& m, const PointSet& ps) { return e_step_impl(m, ps, 0.0); }

Mixture m_step(const PointSet& ps, const Matrix& log_resp) {
  auto out = m_step_impl(ps, log_resp);
  if (!out.collapsed.empty())
    throw std::runtime_error("m_step: component " + std::to_string(out.collapsed.front()) +
                             " has vanishing responsibility mass");
  return out.mixture;
}

EmResult em(const PointSet& ps, Mixture init, double tol, int max_iter,
            std::vector<double>* ll_trace) {
  if (tol <= 0 || max_iter < 1) throw std::invalid_argument("em: bad tol or max_iter");
  constexpr double kJitter = 1e-9;

  Mixture cur = std::move(init);
  double prev_ll = mixture_loglik_impl(cur, ps, kJitter);
  double ll = prev_ll;
  int it = 0;
  while (it < max_iter) {
    ++it;
    const Matrix lr = e_step_impl(cur, ps, kJitter);
    auto out = m_step_impl(ps, lr);
    Mixture next = std::move(out.mixture);

    // Identify components needing a restart: vanished mass, or covariance
    // that stays non-PD even with jitter.
    std::vector<int> bad = out.collapsed;
    for (int k = 0; k < next.K(); ++k) {
      if (std::find(bad.begin(), bad.end(), k) != bad.end()) continue;
      Matrix c = next.components[std::size_t(k)].cov;
      c.diagonal().array() += kJitter * c.trace() / double(c.rows());
      if (!is_pd(c)) bad.push_back(k);
    }
    if (!bad.empty()) {
      // Restart each bad component at a point the current model explains
      // worst, with a spherical covariance over that point's Voronoi cell.
      const auto evals = make_evals(cur, kJitter);
      std::vector<double> log_density(static_cast<std::size_t>(ps.n()));
      std::vector<double> comp(static_cast<std::size_t>(cur.K()));
      for (Index i = 0; i < ps.n(); ++i) {
        for (int q = 0; q < cur.K(); ++q)
          comp[std::size_t(q)] = std::log(cur.weights[q]) +
                                 evals[std::size_t(q)].log_pdf(cur.components[std::size_t(q)].mean, ps.points.row(i));
        log_density[std::size_t(i)] = logsumexp(comp);
      }
      std::vector<char> used(std::size_t(ps.n()), 0);
      for (int k : bad) {
        Index worst = 0;
        double worst_ld = kInf;
        for (Index i = 0; i < ps.n(); ++i) {
          if (!used[std::size_t(i)] && log_density[std::size_t(i)] < worst_ld) {
            worst_ld = log_density[std::size_t(i)];
            worst = i;
          }
        }
        used[std::size_t(worst)] = 1;
        next.components[std::size_t(k)].mean = ps.points.row(worst).transpose();
        next.weights[k] = 1.0 / double(next.K());
      }
      Matrix means(next.K(), ps.d());
      for (int q = 0; q < next.K(); ++q) means.row(q) = next.components[std::size_t(q)].mean;
      const auto labels = assign(ps, means);
      for (int k : bad) {
        std::vector<Index> cell;
        for (Index i = 0; i < ps.n(); ++i)
          if (labels[std::size_t(i)] == k) cell.push_back(i);
        auto& g = next.components[std::size_t(k)];
        if (cell.empty()) {
          g.cov = Matrix::Identity(ps.d(), ps.d());
        } else {
          g.cov = spherical_cov(ps, cell, g.mean);
          if (!is_pd(g.cov)) g.cov = Matrix::Identity(ps.d(), ps.d());
        }
      }
      next.weights /= next.weights.sum();
    }

    cur = std::move(next);
    ll = mixture_loglik_impl(cur, ps, kJitter);
    if (ll_trace) ll_trace->push_back(ll);
    if (std::abs(ll - prev_ll) / std::abs(prev_ll) < tol) break;
    prev_ll = ll;
  }

  EmResult res;
  res.mixture = std::move(cur);
  res.loglik = ll;
  res.iterations = it;
  return res;
}

Mixture means_to_gmm(const PointSet& ps, const Matrix& means, CovMode mode) {
  if (means.rows() < 1) throw std::invalid_argument("means_to_gmm: no means");
  const int K = int(means.rows());
  const auto labels = assign(ps, means);

  std::vector<std::vector<Index>> clusters(static_cast<std::size_t>(K));
  for (Index i = 0; i < ps.n(); ++i) clusters[std::size_t(labels[std::size_t(i)])].push_back(i);

  Mixture m;
  std::vector<double> w;
  for (int k = 0; k < K; ++k) {
    const auto& cluster = clusters[std::size_t(k)];
    if (cluster.empty()) continue;  // dropped; weights renormalized below

    Vector mu = Vector::Zero(ps.d());
    for (Index j : cluster) mu += ps.points.row(j).transpose();
    mu /= double(cluster.size());

    Matrix cov;
    bool ok = false;
    if (mode == CovMode::Aniso) {
      cov = Matrix::Zero(ps.d(), ps.d());
      for (Index j : cluster) {
        const Vector diff = ps.points.row(j).transpose() - mu;
        cov += diff * diff.transpose();
      }
      cov /= double(cluster.size());
      cov = (cov + cov.transpose()) / 2.0;
      ok = is_pd(cov);
    }
    if (!ok) {
      cov = spherical_cov(ps, cluster, mu);
      ok = is_pd(cov);
    }
    if (!ok) cov = Matrix::Identity(ps.d(), ps.d());

    m.components.push_back(Gauss{std::move(mu), std::move(cov)});
    w.push_back(double(cluster.size()) / double(ps.n()));
  }

  m.weights = Eigen::Map<const Vector>(w.data(), Index(w.size()));
  m.weights /= m.weights.sum();
  return m;
}

std::string mixture_to_json(const Mixture& m) {
  nlohmann::ordered_json j;
  j["weights"] = std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size());
  j["components"] = nlohmann::ordered_json::array();
  for (const auto& g : m.components) {
    nlohmann::ordered_json c;
    c["mean"] = std::vector<double>(g.mean.data(), g.mean.data() + g.mean.size());
    std::vector<double> cov;
    cov.reserve(std::size_t(g.cov.size()));
    for (Index r = 0; r < g.cov.rows(); ++r)
      for (Index q = 0; q < g.cov.cols(); ++q) cov.push_back(g.cov(r, q));
    c["cov"] = cov;  // row-major
    j["components"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

Mixture mixture_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Mixture m;
  const auto weights = j.at("weights").get<std::vector<double>>();
  m.weights = Eigen::Map<const Vector>(weights.data(), Index(weights.size()));
  for (const auto& c : j.at("components")) {
    const auto mean = c.at("mean").get<std::vector<double>>();
    const auto cov = c.at("cov").get<std::vector<double>>();
    const Index d = Index(mean.size());
    if (Index(cov.size()) != d * d)
      throw std::runtime_error("mixture_from_json: covariance size mismatch");
    Gauss g;
    g.mean = Eigen::Map<const Vector>(mean.data(), d);
    g.cov.resize(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index q = 0; q < d; ++q) g.cov(r, q) = cov[std::size_t(r * d + q)];
    m.components.push_back(std::move(g));
  }
  if (m.weights.size() != Index(m.components.size()))
    throw std::runtime_error("mixture_from_json: weights/components size mismatch");
  return m;
}

}  // namespace seedkit
