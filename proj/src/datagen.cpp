#include "seedkit/datagen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace seedkit {

namespace {

Matrix random_rotation(int d, RngStream& rng) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.next_normal();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  // Fix the sign convention so Q is a proper function of the draws.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

Mixture generate_model(const ModelSpec& spec, RngStream& rng) {
  if (spec.K < 1 || spec.d < 1) throw std::invalid_argument("generate_model: bad K or d");
  if (!(spec.separation > 0.0)) throw std::invalid_argument("generate_model: separation must be > 0");
  if (spec.eccentricity < 1.0) throw std::invalid_argument("generate_model: eccentricity must be >= 1");
  const int K = spec.K;
  const int d = spec.d;

  Mixture m;
  m.components.resize(std::size_t(K));

  // Covariances first: the separation rule needs their traces.
  std::vector<double> radius(static_cast<std::size_t>(K));  // sqrt(trace)
  for (int k = 0; k < K; ++k) {
    Vector lam(d);
    if (d == 1) {
      lam[0] = 1.0;
    } else {
      for (int i = 0; i < d; ++i)
        lam[i] = std::pow(spec.eccentricity, double(i) / double(d - 1));
      lam *= double(d) / lam.sum();  // average eigenvalue 1
    }
    double scale = 1.0;
    if (spec.sizes == SizeMode::Different) scale = 0.5 + 1.5 * rng.next_double();
    lam *= scale;

    const Matrix q = random_rotation(d, rng);
    Matrix cov = q * lam.asDiagonal() * q.transpose();
    m.components[std::size_t(k)].cov = (cov + cov.transpose()) / 2.0;
    radius[std::size_t(k)] = std::sqrt(m.components[std::size_t(k)].cov.trace());
  }

  // Means by rejection inside a box sized from the separation demand.
  double rmax = 0.0;
  for (double r : radius) rmax = std::max(rmax, r);
  const double side =
      spec.separation * rmax * 2.0 * std::max(2.0, 1.5 * std::pow(double(K), 1.0 / double(d)));
  const long budget = 200L * K;
  long attempts = 0;
  for (int k = 0; k < K; ++k) {
    for (;;) {
      if (attempts++ > budget)
        throw std::runtime_error("generate_model: could not place component means (spec infeasible)");
      Vector mu(d);
      for (int i = 0; i < d; ++i) mu[i] = side * rng.next_double();
      bool ok = true;
      for (int j = 0; j < k; ++j) {
        const double need = spec.separation * std::max(radius[std::size_t(k)], radius[std::size_t(j)]);
        if ((mu - m.components[std::size_t(j)].mean).norm() < need) {
          ok = false;
          break;
        }
      }
      if (ok) {
        m.components[std::size_t(k)].mean = std::move(mu);
        break;
      }
    }
  }

  m.weights = Vector::Constant(K, 1.0 / double(K));
  if (spec.weights == WeightMode::Different) {
    // Dirichlet(1,...,1): normalized standard exponentials.
    for (int k = 0; k < K; ++k) m.weights[k] = -std::log(1.0 - rng.next_double());
    m.weights /= m.weights.sum();
  }
  return m;
}

LabeledPointSet sample_dataset(const Mixture& m, Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
  const int K = m.K();
  const Index d = m.d();

  std::vector<Matrix> chol(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.components[std::size_t(k)].cov);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("sample_dataset: component covariance not PD");
    chol[std::size_t(k)] = llt.matrixL();
  }

  LabeledPointSet out;
  out.points.points.resize(n, d);
  out.labels.resize(std::size_t(n));
  for (Index i = 0; i < n; ++i) {
    const double u = rng.next_double();
    int k = K - 1;
    double cum = 0.0;
    for (int q = 0; q < K; ++q) {
      cum += m.weights[q];
      if (u < cum) {
        k = q;
        break;
      }
    }
    Vector z(d);
    for (Index j = 0; j < d; ++j) z[j] = rng.next_normal();
    out.points.points.row(i) =
        (m.components[std::size_t(k)].mean + chol[std::size_t(k)] * z).transpose();
    out.labels[std::size_t(i)] = k;
  }
  return out;
}

PointSet add_noise(const PointSet& ps, Index clean_count, Index noise_count,
                   double expansion, RngStream& rng) {
  if (clean_count < 1 || clean_count > ps.n())
    throw std::invalid_argument("add_noise: clean_count out of range");
  if (noise_count < 0 || !(expansion > 0.0))
    throw std::invalid_argument("add_noise: bad noise_count or expansion");

  const Index d = ps.d();
  Matrix out(clean_count + noise_count, d);
  out.topRows(clean_count) = ps.points.topRows(clean_count);

  Vector lo(d), hi(d);
  for (Index c = 0; c < d; ++c) {
    lo[c] = ps.points.col(c).head(clean_count).minCoeff();
    hi[c] = ps.points.col(c).head(clean_count).maxCoeff();
    const double pad = (hi[c] - lo[c]) * expansion / 2.0;
    lo[c] -= pad;
    hi[c] += pad;
  }
  for (Index i = 0; i < noise_count; ++i)
    for (Index c = 0; c < d; ++c)
      out(clean_count + i, c) = lo[c] + (hi[c] - lo[c]) * rng.next_double();
  return PointSet(std::move(out));
}

Mixture grid_model() {
  constexpr int kComponents = 27;
  constexpr double kLongSigma = 0.2;
  constexpr double kShortSigma = 0.04;

  Mixture m;
  m.weights = Vector::Constant(kComponents, 1.0 / kComponents);
  m.components.resize(kComponents);
  for (int i = 0; i < kComponents; ++i) {
    Vector mu(3);
    mu << double(i % 3), double((i / 3) % 3), double(i / 9);
    Matrix cov = Matrix::Identity(3, 3) * (kShortSigma * kShortSigma);
    const int longAxis = i % 3;
    cov(longAxis, longAxis) = kLongSigma * kLongSigma;
    m.components[std::size_t(i)] = Gauss{std::move(mu), std::move(cov)};
  }
  return m;
}

}  // namespace seedkit
