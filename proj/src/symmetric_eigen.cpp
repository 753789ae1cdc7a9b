#include "effdom/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace effdom {

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, int max_sweeps) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "jacobi_eigen needs a square matrix");
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  SymmetricEigen out;

  const auto off_sum = [&] {
    double sm = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) sm += std::abs(a(p, q));
    return sm;
  };

  bool converged = n <= 1;
  for (int sweep = 1; sweep <= max_sweeps && !converged; ++sweep) {
    const double sm = off_sum();
    if (sm == 0.0) {
      converged = true;
      break;
    }
    out.sweeps = sweep;
    const double thresh = sweep < 4 ? 0.2 * sm / static_cast<double>(n * n) : 0.0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        // Past the first sweeps, drop entries that no longer perturb the diagonal.
        if (sweep > 4 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= thresh || apq == 0.0) continue;

        const double h = a(q, q) - a(p, p);
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double shift = t * apq;
        a(p, p) -= shift;
        a(q, q) += shift;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (!converged && off_sum() != 0.0)
    throw Error(ErrorCode::EigensolverFailure, "Jacobi iteration did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.values[i] = a(src, src);
    out.vectors.col(i) = v.col(src);
  }
  return out;
}

Eigen::MatrixXd complement_basis(const Vector& u) {
  const Eigen::Index n = u.size();
  if (n <= 1) return Eigen::MatrixXd(n, 0);
  Vector w = u;
  w[0] += u[0] >= 0.0 ? 1.0 : -1.0;
  const Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
  return h.rightCols(n - 1);
}

Vector restricted_eigenvalues(const Eigen::MatrixXd& a, const Vector& u) {
  const Eigen::MatrixXd basis = complement_basis(u);
  Eigen::MatrixXd block = basis.transpose() * a * basis;
  block = 0.5 * (block + block.transpose()).eval();
  return jacobi_eigen(std::move(block)).values;
}

}  // namespace effdom
