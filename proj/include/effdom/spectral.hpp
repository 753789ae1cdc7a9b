#pragma once

#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "effdom/kernel.hpp"

namespace effdom {

/// <f, g>_pi = sum_x pi_x f_x g_x.
class PiInnerProduct {
 public:
  explicit PiInnerProduct(const StationaryDistribution& pi) : weights_(pi.vector()) {}

  double operator()(const Vector& f, const Vector& g) const;
  double norm_squared(const Vector& f) const { return (*this)(f, f); }
  double norm(const Vector& f) const;

 private:
  Vector weights_;
};

/// Spectrum of the kernel operator on the mean-zero subspace L^2_0(pi).
struct SpectralDecomposition {
  Vector eigenvalues;                 // n - 1 values, ascending
  std::vector<Vector> eigenvectors;   // pi-orthonormal, each of zero pi-mean
  double residual = 0.0;              // max_i ||P phi_i - lambda_i phi_i||_pi
  double orthonormality_defect = 0.0; // max_ij |<phi_i, phi_j>_pi - delta_ij|

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double max_eigenvalue() const;
  double min_eigenvalue() const;
  double spectral_radius() const;
};

struct SpectralAtom {
  double lambda = 0.0;
  double weight = 0.0;
};

struct SpectralMeasure {
  std::vector<SpectralAtom> atoms;

  double total_mass() const;
  /// Mass carried by atoms with lambda > 1 - width.
  double mass_near_one(double width = tol::kOne) const;
  /// Mass carried by atoms with lambda < -1 + width.
  double mass_near_minus_one(double width = tol::kOne) const;
};

enum class VarianceMethod { Spectral, Autocov, Empirical };
std::string_view to_string(VarianceMethod m);

struct VarianceResult {
  double value = 0.0;  // +infinity marks a divergent variance
  VarianceMethod method = VarianceMethod::Spectral;
  double weight_near_one = 0.0;
  // Autocovariance method only.
  double truncation_bound = 0.0;
  std::size_t lags = 0;
  // Empirical method only.
  double standard_error = 0.0;

  bool finite() const noexcept { return value < std::numeric_limits<double>::infinity(); }
};

struct AutocovarianceSequence {
  std::vector<double> gammas;  // gamma_0 .. gamma_K
};

/// Requires detailed balance for `pi`; throws NotReversible otherwise and
/// EigensolverFailure when the residual contract cannot be met.
SpectralDecomposition eigendecompose_restricted(const TransitionKernel& k,
                                                const StationaryDistribution& pi);

SpectralMeasure spectral_measure(const Observable& f, const SpectralDecomposition& dec,
                                 const StationaryDistribution& pi);

/// sum_i w_i (1 + lambda_i) / (1 - lambda_i), with divergence marked by
/// +infinity whenever an atom within tol_one of 1 carries mass above tol_mass.
/// No hypotheses are checked; this is the evaluation step of the spectral route.
VarianceResult variance_from_measure(const SpectralMeasure& measure);

/// v(f, P) through the spectral formula. The observable is centered first.
/// Throws NotReversible or NotIrreducible when the hypotheses fail.
VarianceResult asymptotic_variance_spectral(const Observable& f, const TransitionKernel& k,
                                            const StationaryDistribution& pi);

/// gamma_k = <f, P^k f>_pi for k = 0..kmax by repeated matrix-vector products.
AutocovarianceSequence lag_autocovariance(const Observable& f, const TransitionKernel& k,
                                          const StationaryDistribution& pi, std::size_t kmax);

/// gamma_0 + 2 sum_{k=1}^{K} gamma_k with K picked from the geometric tail
/// bound. Periodic kernels are accepted only when f carries no spectral mass
/// at -1.
VarianceResult asymptotic_variance_autocov(const Observable& f, const TransitionKernel& k,
                                           const StationaryDistribution& pi,
                                           double tail_tol = 1e-10);

}  // namespace effdom
