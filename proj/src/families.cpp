#include "effdom/families.hpp"

#include <cmath>

namespace effdom::families {

StationaryDistribution uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform target needs at least one state");
  return StationaryDistribution(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

TransitionKernel two_state_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "flip probability must lie in [0,1]");
  Matrix m(2, 2);
  m << 1.0 - p, p, p, 1.0 - p;
  return validate_kernel(std::move(m), uniform(2));
}

TransitionKernel cycle_walk(std::size_t n, double beta) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "cycle walk needs at least three states");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "laziness must lie in [0,1]");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix m = Matrix::Zero(size, size);
  const double step = 0.5 * (1.0 - beta);
  for (Eigen::Index x = 0; x < size; ++x) {
    m(x, x) = beta;
    m(x, (x + 1) % size) += step;
    m(x, (x + size - 1) % size) += step;
  }
  return validate_kernel(std::move(m), uniform(n));
}

StationaryDistribution peaked_target(std::size_t n, double width) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "target needs at least one state");
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "peak width must be positive");
  const double centre = 0.5 * static_cast<double>(n - 1);
  Vector pi(static_cast<Eigen::Index>(n));
  for (Eigen::Index x = 0; x < pi.size(); ++x)
    pi[x] = std::exp(-std::abs(static_cast<double>(x) - centre) / width);
  pi /= pi.sum();
  return StationaryDistribution(std::move(pi));
}

TransitionKernel local_proposal(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "local proposal needs at least two states");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix q = Matrix::Zero(size, size);
  for (Eigen::Index x = 0; x < size; ++x) {
    q(x, x > 0 ? x - 1 : x) += 0.5;
    q(x, x + 1 < size ? x + 1 : x) += 0.5;
  }
  return validate_stochastic(std::move(q));
}

TransitionKernel uniform_proposal(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform proposal needs at least one state");
  const auto size = static_cast<Eigen::Index>(n);
  return validate_stochastic(Matrix::Constant(size, size, 1.0 / static_cast<double>(n)));
}

}  // namespace effdom::families
