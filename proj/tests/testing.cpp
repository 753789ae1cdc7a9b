#include "testing.hpp"

#include <algorithm>
#include <cmath>

namespace effdom::testkit {

StationaryDistribution random_distribution(Rng& rng, std::size_t n, double min_weight) {
  std::uniform_real_distribution<double> u(min_weight, 1.0);
  Vector pi(static_cast<Eigen::Index>(n));
  for (auto& v : pi) v = u(rng);
  pi /= pi.sum();
  return StationaryDistribution(std::move(pi));
}

Observable random_observable(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Vector f(static_cast<Eigen::Index>(n));
  for (auto& v : f) v = g(rng);
  return Observable(std::move(f));
}

Observable random_centered(Rng& rng, const StationaryDistribution& pi) {
  return center_observable(random_observable(rng, pi.size()), pi);
}

TransitionKernel random_reversible(Rng& rng, const StationaryDistribution& pi, double density,
                                   double slack) {
  const auto n = static_cast<Eigen::Index>(pi.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = x + 1; y < n; ++y)
      if (y == x + 1 || u(rng) < density) c(x, y) = c(y, x) = weight(rng);

  double busiest = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) busiest = std::max(busiest, c.row(x).sum() / pi[static_cast<std::size_t>(x)]);
  const double scale = busiest > 0.0 ? (1.0 - slack) / busiest : 0.0;
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double moved = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x) continue;
      p(x, y) = scale * c(x, y) / pi[static_cast<std::size_t>(x)];
      moved += p(x, y);
    }
    p(x, x) = 1.0 - moved;
  }
  return validate_kernel(std::move(p), pi);
}

std::pair<StationaryDistribution, TransitionKernel> random_bipartite_walk(Rng& rng, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  const Eigen::Index left = size / 2;
  const auto right = [&](Eigen::Index i) { return left + i; };
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(size, size);
  const auto link = [&](Eigen::Index a, Eigen::Index b) { c(a, b) = c(b, a) = weight(rng); };
  // Path L0 R0 L1 R1 ... L_{left-1}, then every other right vertex hangs off a left one.
  for (Eigen::Index i = 0; i < left; ++i) {
    link(i, right(i));
    if (i + 1 < left) link(right(i), i + 1);
  }
  for (Eigen::Index j = left; j < size - left; ++j) link(right(j), j % left);
  for (Eigen::Index x = 0; x < left; ++x)
    for (Eigen::Index y = left; y < size; ++y)
      if (u(rng) < 0.3) link(x, y);
  const Vector degree = c.rowwise().sum();
  StationaryDistribution pi(Vector(degree / degree.sum()));
  Matrix p(size, size);
  for (Eigen::Index x = 0; x < size; ++x) p.row(x) = c.row(x) / degree[x];
  auto k = validate_kernel(std::move(p), pi);
  return {std::move(pi), std::move(k)};
}

Eigen::MatrixXd random_pi_basis(Rng& rng, const StationaryDistribution& pi) {
  const auto n = static_cast<Eigen::Index>(pi.size());
  std::normal_distribution<double> g;
  const Vector& w = pi.vector();
  Eigen::MatrixXd basis(n, n - 1);
  const Vector ones = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    Vector v(n);
    for (auto& x : v) x = g(rng);
    for (int pass = 0; pass < 2; ++pass) {
      v -= (w.array() * v.array()).sum() * ones;
      for (Eigen::Index j = 0; j < i; ++j)
        v -= (w.array() * v.array() * basis.col(j).array()).sum() * basis.col(j);
    }
    v /= std::sqrt((w.array() * v.array().square()).sum());
    basis.col(i) = v;
  }
  return basis;
}

Matrix kernel_with_spectrum(const StationaryDistribution& pi, const Eigen::MatrixXd& basis,
                            const Vector& lambdas) {
  const Eigen::MatrixXd m = basis * lambdas.asDiagonal() * basis.transpose();
  const auto n = static_cast<Eigen::Index>(pi.size());
  Matrix p(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) p(x, y) = pi.vector()[y] * (1.0 + m(x, y));
  return p;
}

double max_safe_scale(const StationaryDistribution&, const Eigen::MatrixXd& basis,
                      const std::vector<Vector>& lambda_sets) {
  double scale = 1.0;
  for (const auto& lambdas : lambda_sets) {
    const Eigen::MatrixXd m = basis * lambdas.asDiagonal() * basis.transpose();
    const double worst = m.minCoeff();
    if (worst < 0.0) scale = std::min(scale, 0.95 / -worst);
  }
  return scale;
}

TransitionKernel boost_off_diagonal(Rng& rng, const TransitionKernel& q, const StationaryDistribution& pi,
                                    int moves) {
  Matrix p = q.matrix();
  const auto n = static_cast<Eigen::Index>(pi.size());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int m = 0; m < moves; ++m) {
    const auto x = pick(rng);
    auto y = pick(rng);
    if (x == y) y = (y + 1) % n;
    const double px = pi.vector()[x];
    const double py = pi.vector()[y];
    const double flux = u(rng) * std::min(px * p(x, x), py * p(y, y));
    p(x, y) += flux / px;
    p(x, x) -= flux / px;
    p(y, x) += flux / py;
    p(y, y) -= flux / py;
  }
  return validate_kernel(std::move(p), pi);
}

std::vector<double> direct_autocovariances(const Matrix& p, const StationaryDistribution& pi,
                                           const Vector& f, std::size_t kmax) {
  const auto n = static_cast<std::size_t>(pi.size());
  double mean = 0.0;
  for (std::size_t x = 0; x < n; ++x) mean += pi[x] * f[static_cast<Eigen::Index>(x)];
  std::vector<double> f0(n);
  for (std::size_t x = 0; x < n; ++x) f0[x] = f[static_cast<Eigen::Index>(x)] - mean;

  std::vector<double> g = f0;
  std::vector<double> next(n);
  std::vector<double> gammas;
  gammas.reserve(kmax + 1);
  for (std::size_t lag = 0; lag <= kmax; ++lag) {
    double gamma = 0.0;
    for (std::size_t x = 0; x < n; ++x) gamma += pi[x] * f0[x] * g[x];
    gammas.push_back(gamma);
    for (std::size_t x = 0; x < n; ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < n; ++y)
        s += p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * g[y];
      next[x] = s;
    }
    std::swap(g, next);
  }
  return gammas;
}

double finite_n_variance(const Matrix& p, const StationaryDistribution& pi, const Vector& f,
                         std::size_t n_steps) {
  const auto gammas = direct_autocovariances(p, pi, f, n_steps - 1);
  const auto big_n = static_cast<double>(n_steps);
  double v = gammas[0];
  for (std::size_t k = 1; k < n_steps; ++k) v += 2.0 * (1.0 - static_cast<double>(k) / big_n) * gammas[k];
  return v;
}

double fundamental_matrix_variance(const Matrix& p, const StationaryDistribution& pi, const Vector& f) {
  const auto n = static_cast<Eigen::Index>(pi.size());
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(p) +
                            Vector::Ones(n) * pi.vector().transpose();
  const Vector f0 = f.array() - pi.vector().dot(f);
  const Vector z = a.partialPivLu().solve(f0);
  return (pi.vector().array() * f0.array() * (2.0 * z - f0).array()).sum();
}

Vector reference_eigenvalues(const Matrix& p, const StationaryDistribution& pi) {
  const Vector s = pi.vector().cwiseSqrt();
  Eigen::MatrixXd sym = s.asDiagonal() * Eigen::MatrixXd(p) * s.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  return solver.eigenvalues();
}

Eigen::MatrixXd random_spd(Rng& rng, std::size_t n, double lo, double hi) {
  const auto size = static_cast<Eigen::Index>(n);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd a(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) a(i, j) = g(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Vector d(size);
  for (auto& v : d) v = u(rng);
  Eigen::MatrixXd spd = q * d.asDiagonal() * q.transpose();
  return 0.5 * (spd + spd.transpose());
}

}  // namespace effdom::testkit
