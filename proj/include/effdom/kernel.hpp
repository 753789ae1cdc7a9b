#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "effdom/error.hpp"
#include "effdom/tolerances.hpp"

namespace effdom {

// Dense, row-major: row x is the distribution of the next state from x.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class StateSpace {
 public:
  explicit StateSpace(std::size_t n, std::optional<std::vector<std::string>> labels = std::nullopt);

  std::size_t size() const noexcept { return n_; }
  const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }
  std::string label(std::size_t x) const;

 private:
  std::size_t n_;
  std::optional<std::vector<std::string>> labels_;
};

/// Strictly positive probability vector; construction validates.
class StationaryDistribution {
 public:
  explicit StationaryDistribution(Vector pi);

  std::size_t size() const noexcept { return static_cast<std::size_t>(pi_.size()); }
  double operator[](std::size_t x) const { return pi_[static_cast<Eigen::Index>(x)]; }
  const Vector& vector() const noexcept { return pi_; }

  bool approx_equal(const StationaryDistribution& other, double tol = tol::kReversible) const;

 private:
  Vector pi_;
};

struct KernelChecks {
  bool stochastic = false;
  bool stationary = false;
  bool reversible = false;
};

/// A row-stochastic matrix together with the checks it passed. Instances
/// only come out of the validators and constructors below, so a kernel in
/// hand is always stochastic; entries are never altered after validation.
class TransitionKernel {
 public:
  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.rows()); }
  const Matrix& matrix() const noexcept { return p_; }
  double operator()(std::size_t x, std::size_t y) const {
    return p_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  const KernelChecks& checks() const noexcept { return checks_; }

  /// The distribution the stationarity/reversibility flags refer to, if any.
  const std::optional<StationaryDistribution>& validated_for() const noexcept { return pi_; }

  /// Uses the cached flag when `pi` is the distribution this kernel was
  /// validated against, otherwise checks detailed balance directly.
  bool reversible_for(const StationaryDistribution& pi) const;

 private:
  TransitionKernel(Matrix p, KernelChecks checks, std::optional<StationaryDistribution> pi)
      : p_(std::move(p)), checks_(checks), pi_(std::move(pi)) {}

  friend TransitionKernel validate_kernel(Matrix p, const StationaryDistribution& pi);
  friend TransitionKernel validate_stochastic(Matrix p);

  Matrix p_;
  KernelChecks checks_;
  std::optional<StationaryDistribution> pi_;
};

struct Observable {
  Vector f;
  bool centered = false;

  Observable() = default;
  explicit Observable(Vector values, bool is_centered = false)
      : f(std::move(values)), centered(is_centered) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(f.size()); }
};

struct PeriodReport {
  std::size_t period = 1;
  // Cyclic classes in flow order; a single class holding every state when aperiodic.
  std::vector<std::vector<std::size_t>> classes;
};

// Throws NegativeEntry / RowSumViolation / DimensionMismatch; otherwise
// returns the kernel with stationarity and reversibility flags for `pi`.
TransitionKernel validate_kernel(Matrix p, const StationaryDistribution& pi);
// Same stochasticity checks, no target distribution (e.g. proposals).
TransitionKernel validate_stochastic(Matrix p);

bool is_stationary(const Matrix& p, const StationaryDistribution& pi);
bool is_reversible(const Matrix& p, const StationaryDistribution& pi);
/// Largest |pi_x p[x,y] - pi_y p[y,x]|, unscaled.
double detailed_balance_defect(const Matrix& p, const StationaryDistribution& pi);

bool check_irreducible(const TransitionKernel& k);
PeriodReport compute_period(const TransitionKernel& k);

TransitionKernel make_iid(const StationaryDistribution& pi);
TransitionKernel make_metropolis_hastings(const TransitionKernel& proposal,
                                          const StationaryDistribution& pi);
TransitionKernel make_mixture(std::span<const TransitionKernel> kernels,
                              std::span<const double> alpha);
TransitionKernel make_lazy(const TransitionKernel& k, double beta);

Observable center_observable(const Observable& f, const StationaryDistribution& pi);
/// E_pi f.
double expectation(const Vector& f, const StationaryDistribution& pi);
/// True when |E_pi f| is within the centering tolerance.
bool is_centered(const Vector& f, const StationaryDistribution& pi);

/// Divides each row by its sum. Rows summing to zero are left alone.
Matrix renormalize_rows(Matrix p);

}  // namespace effdom
