#include "effdom/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace effdom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::NotAperiodic: return "NotAperiodic";
    case ErrorCode::SpectralRadiusOne: return "SpectralRadiusOne";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::DifferentStationary: return "DifferentStationary";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::TooFewBatches: return "TooFewBatches";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

StateSpace::StateSpace(std::size_t n, std::optional<std::vector<std::string>> labels)
    : n_(n), labels_(std::move(labels)) {
  if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "state space must have at least one state");
  if (labels_) {
    if (labels_->size() != n_)
      throw Error(ErrorCode::DimensionMismatch, "label count differs from state count");
    std::set<std::string> seen(labels_->begin(), labels_->end());
    if (seen.size() != n_) throw Error(ErrorCode::InvalidArgument, "state labels must be distinct");
  }
}

std::string StateSpace::label(std::size_t x) const {
  if (labels_) return (*labels_)[x];
  return std::to_string(x);
}

StationaryDistribution::StationaryDistribution(Vector pi) : pi_(std::move(pi)) {
  if (pi_.size() == 0) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  for (Eigen::Index x = 0; x < pi_.size(); ++x) {
    if (!std::isfinite(pi_[x]) || pi_[x] <= 0.0) {
      std::ostringstream os;
      os << "pi[" << x << "] = " << pi_[x] << " is not strictly positive";
      throw Error(ErrorCode::InvalidDistribution, os.str());
    }
  }
  const double total = pi_.sum();
  if (std::abs(total - 1.0) > tol::kSum) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << total;
    throw Error(ErrorCode::InvalidDistribution, os.str());
  }
}

bool StationaryDistribution::approx_equal(const StationaryDistribution& other, double tol) const {
  return size() == other.size() && (pi_ - other.pi_).cwiseAbs().maxCoeff() <= tol;
}

bool TransitionKernel::reversible_for(const StationaryDistribution& pi) const {
  if (pi.size() != size()) return false;
  if (pi_ && pi_->approx_equal(pi, 0.0)) return checks_.reversible;
  return is_reversible(p_, pi);
}

namespace {

void check_stochastic(const Matrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "kernel must be a non-empty square matrix");
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      const double v = p(x, y);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "p[" << x << "," << y << "] is not finite";
        throw Error(ErrorCode::InvalidArgument, os.str());
      }
      if (v < -tol::kSum) {
        std::ostringstream os;
        os << "p[" << x << "," << y << "] = " << v;
        throw Error(ErrorCode::NegativeEntry, os.str());
      }
    }
    const double row = p.row(x).sum();
    if (std::abs(row - 1.0) > tol::kSum) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << x << " sums to " << row;
      throw Error(ErrorCode::RowSumViolation, os.str());
    }
  }
}

// Adjacency of the support digraph.
std::vector<std::vector<std::size_t>> support_graph(const Matrix& p, bool transpose) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > tol::kEdge)
        adj[transpose ? y : x].push_back(transpose ? x : y);
  return adj;
}

// BFS levels from state 0; unreachable states keep -1.
std::vector<long> bfs_levels(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<long> level(adj.size(), -1);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adj[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

}  // namespace

TransitionKernel validate_stochastic(Matrix p) {
  check_stochastic(p);
  return TransitionKernel(std::move(p), KernelChecks{true, false, false}, std::nullopt);
}

TransitionKernel validate_kernel(Matrix p, const StationaryDistribution& pi) {
  if (static_cast<std::size_t>(p.rows()) != pi.size() || p.rows() != p.cols()) {
    std::ostringstream os;
    os << "kernel is " << p.rows() << "x" << p.cols() << " but pi has " << pi.size() << " states";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  check_stochastic(p);
  KernelChecks checks;
  checks.stochastic = true;
  checks.stationary = is_stationary(p, pi);
  checks.reversible = is_reversible(p, pi);
  return TransitionKernel(std::move(p), checks, pi);
}

bool is_stationary(const Matrix& p, const StationaryDistribution& pi) {
  if (static_cast<std::size_t>(p.rows()) != pi.size()) return false;
  const Vector pushed = p.transpose() * pi.vector();
  return (pushed - pi.vector()).cwiseAbs().maxCoeff() <= tol::kReversible;
}

double detailed_balance_defect(const Matrix& p, const StationaryDistribution& pi) {
  const Matrix flux = pi.vector().asDiagonal() * p;
  return (flux - flux.transpose()).cwiseAbs().maxCoeff();
}

bool is_reversible(const Matrix& p, const StationaryDistribution& pi) {
  if (static_cast<std::size_t>(p.rows()) != pi.size()) return false;
  const Matrix flux = pi.vector().asDiagonal() * p;
  const double scale = std::max(flux.cwiseAbs().maxCoeff(), 0.0);
  return (flux - flux.transpose()).cwiseAbs().maxCoeff() <= tol::kReversible * scale;
}

bool check_irreducible(const TransitionKernel& k) {
  const auto forward = bfs_levels(support_graph(k.matrix(), false));
  const auto backward = bfs_levels(support_graph(k.matrix(), true));
  const auto unreached = [](long l) { return l < 0; };
  return std::none_of(forward.begin(), forward.end(), unreached) &&
         std::none_of(backward.begin(), backward.end(), unreached);
}

PeriodReport compute_period(const TransitionKernel& k) {
  if (!check_irreducible(k)) throw Error(ErrorCode::NotIrreducible, "period requires an irreducible kernel");
  const auto adj = support_graph(k.matrix(), false);
  const auto level = bfs_levels(adj);

  // Every cycle length is a sum of the level offsets level[u] + 1 - level[v]
  // along its edges, so their gcd is the period.
  long d = 0;
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (auto v : adj[u]) d = std::gcd(d, std::abs(level[u] + 1 - level[v]));
  if (d == 0) d = 1;  // unreachable for an irreducible kernel, kept for safety of the modulus

  PeriodReport report;
  report.period = static_cast<std::size_t>(d);
  report.classes.resize(report.period);
  for (std::size_t x = 0; x < level.size(); ++x)
    report.classes[static_cast<std::size_t>(level[x] % d)].push_back(x);
  return report;
}

TransitionKernel make_iid(const StationaryDistribution& pi) {
  const auto n = static_cast<Eigen::Index>(pi.size());
  Matrix p(n, n);
  for (Eigen::Index x = 0; x < n; ++x) p.row(x) = pi.vector().transpose();
  return validate_kernel(std::move(p), pi);
}

TransitionKernel make_metropolis_hastings(const TransitionKernel& proposal,
                                          const StationaryDistribution& pi) {
  if (proposal.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "proposal and target differ in dimension");
  const auto n = static_cast<Eigen::Index>(pi.size());
  const Matrix& q = proposal.matrix();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double moved = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x || q(x, y) <= 0.0) continue;
      const double forward = pi.vector()[x] * q(x, y);
      const double backward = pi.vector()[y] * q(y, x);
      // min(q_xy, pi_y q_yx / pi_x) keeps the flux pi_x p_xy exactly symmetric.
      p(x, y) = std::min(forward, backward) / pi.vector()[x];
      moved += p(x, y);
    }
    p(x, x) = 1.0 - moved;
  }
  return validate_kernel(std::move(p), pi);
}

TransitionKernel make_mixture(std::span<const TransitionKernel> kernels,
                              std::span<const double> alpha) {
  if (kernels.empty()) throw Error(ErrorCode::BadWeights, "mixture of zero kernels");
  if (kernels.size() != alpha.size())
    throw Error(ErrorCode::DimensionMismatch, "weight count differs from kernel count");
  double total = 0.0;
  for (double a : alpha) {
    if (!std::isfinite(a) || a < 0.0) throw Error(ErrorCode::BadWeights, "weights must be nonnegative");
    total += a;
  }
  if (std::abs(total - 1.0) > tol::kSum) throw Error(ErrorCode::BadWeights, "weights must sum to 1");

  const auto n = kernels.front().size();
  const StationaryDistribution* shared = nullptr;
  bool all_have_pi = true;
  for (const auto& k : kernels) {
    if (k.size() != n) throw Error(ErrorCode::DimensionMismatch, "mixture components differ in dimension");
    if (!k.validated_for()) {
      all_have_pi = false;
      continue;
    }
    if (shared == nullptr) {
      shared = &*k.validated_for();
    } else if (!shared->approx_equal(*k.validated_for())) {
      throw Error(ErrorCode::DifferentStationary, "mixture components validated for different targets");
    }
  }

  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < kernels.size(); ++i) p += alpha[i] * kernels[i].matrix();
  if (all_have_pi && shared != nullptr) return validate_kernel(std::move(p), *shared);
  return validate_stochastic(std::move(p));
}

TransitionKernel make_lazy(const TransitionKernel& k, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "laziness must lie in [0,1]");
  const auto n = static_cast<Eigen::Index>(k.size());
  Matrix p = beta * Matrix::Identity(n, n) + (1.0 - beta) * k.matrix();
  if (k.validated_for()) return validate_kernel(std::move(p), *k.validated_for());
  return validate_stochastic(std::move(p));
}

double expectation(const Vector& f, const StationaryDistribution& pi) {
  if (static_cast<std::size_t>(f.size()) != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "observable and pi differ in dimension");
  return pi.vector().dot(f);
}

bool is_centered(const Vector& f, const StationaryDistribution& pi) {
  const double scale = std::max(1.0, f.size() ? f.cwiseAbs().maxCoeff() : 0.0);
  return std::abs(expectation(f, pi)) <= tol::kCenter * scale;
}

Observable center_observable(const Observable& f, const StationaryDistribution& pi) {
  const double mean = expectation(f.f, pi);
  Vector centered = f.f.array() - mean;
  return Observable(std::move(centered), true);
}

Matrix renormalize_rows(Matrix p) {
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    const double row = p.row(x).sum();
    if (row > 0.0) p.row(x) /= row;
  }
  return p;
}

}  // namespace effdom
