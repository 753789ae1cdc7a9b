#include "effdom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "effdom/symmetric_eigen.hpp"

namespace effdom {

double PiInnerProduct::operator()(const Vector& f, const Vector& g) const {
  if (f.size() != weights_.size() || g.size() != weights_.size())
    throw Error(ErrorCode::DimensionMismatch, "inner product operands differ in dimension");
  return (weights_.array() * f.array() * g.array()).sum();
}

double PiInnerProduct::norm(const Vector& f) const { return std::sqrt(norm_squared(f)); }

double SpectralDecomposition::max_eigenvalue() const {
  return eigenvalues.size() ? eigenvalues[eigenvalues.size() - 1] : 0.0;
}

double SpectralDecomposition::min_eigenvalue() const {
  return eigenvalues.size() ? eigenvalues[0] : 0.0;
}

double SpectralDecomposition::spectral_radius() const {
  return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

double SpectralMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms) total += a.weight;
  return total;
}

double SpectralMeasure::mass_near_one(double width) const {
  double mass = 0.0;
  for (const auto& a : atoms)
    if (a.lambda > 1.0 - width) mass += a.weight;
  return mass;
}

double SpectralMeasure::mass_near_minus_one(double width) const {
  double mass = 0.0;
  for (const auto& a : atoms)
    if (a.lambda < -1.0 + width) mass += a.weight;
  return mass;
}

std::string_view to_string(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::Spectral: return "spectral";
    case VarianceMethod::Autocov: return "autocov";
    case VarianceMethod::Empirical: return "empirical";
  }
  return "unknown";
}

namespace {

void require_dimension(const TransitionKernel& k, const StationaryDistribution& pi) {
  if (k.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "kernel and pi differ in dimension");
}

void require_reversible(const TransitionKernel& k, const StationaryDistribution& pi) {
  require_dimension(k, pi);
  if (!k.reversible_for(pi))
    throw Error(ErrorCode::NotReversible, "kernel does not satisfy detailed balance for pi");
}

void require_irreducible(const TransitionKernel& k) {
  if (!check_irreducible(k))
    throw Error(ErrorCode::NotIrreducible, "kernel support graph is not strongly connected");
}

}  // namespace

SpectralDecomposition eigendecompose_restricted(const TransitionKernel& k,
                                                const StationaryDistribution& pi) {
  require_reversible(k, pi);
  const auto n = static_cast<Eigen::Index>(pi.size());
  const Vector sqrt_pi = pi.vector().cwiseSqrt();
  const Vector inv_sqrt_pi = sqrt_pi.cwiseInverse();

  Eigen::MatrixXd s = sqrt_pi.asDiagonal() * k.matrix() * inv_sqrt_pi.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();

  // The constant function maps to sqrt(pi); deflate it before solving.
  const Eigen::MatrixXd basis = complement_basis(sqrt_pi.normalized());
  Eigen::MatrixXd block = basis.transpose() * s * basis;
  block = 0.5 * (block + block.transpose()).eval();
  const SymmetricEigen eig = jacobi_eigen(std::move(block));

  SpectralDecomposition dec;
  dec.eigenvalues = eig.values;
  const PiInnerProduct inner(pi);
  const Vector ones = Vector::Ones(n);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    Vector phi = inv_sqrt_pi.asDiagonal() * (basis * eig.vectors.col(i));
    // One modified Gram-Schmidt pass in the pi inner product.
    phi -= inner(phi, ones) * ones;
    for (const auto& prev : dec.eigenvectors) phi -= inner(phi, prev) * prev;
    phi /= inner.norm(phi);
    dec.eigenvectors.push_back(std::move(phi));
  }

  for (std::size_t i = 0; i < dec.eigenvectors.size(); ++i) {
    const Vector& phi = dec.eigenvectors[i];
    const Vector r = k.matrix() * phi - dec.eigenvalues[static_cast<Eigen::Index>(i)] * phi;
    dec.residual = std::max(dec.residual, inner.norm(r));
    for (std::size_t j = 0; j <= i; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      dec.orthonormality_defect =
          std::max(dec.orthonormality_defect, std::abs(inner(phi, dec.eigenvectors[j]) - target));
    }
  }
  if (dec.residual > tol::kResidual || dec.orthonormality_defect > tol::kOrthonormal)
    throw Error(ErrorCode::EigensolverFailure,
                "restricted eigenpairs miss the residual/orthonormality contract");
  return dec;
}

SpectralMeasure spectral_measure(const Observable& f, const SpectralDecomposition& dec,
                                 const StationaryDistribution& pi) {
  if (f.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "observable and pi differ in dimension");
  if (!is_centered(f.f, pi)) throw Error(ErrorCode::NotCentered, "observable has nonzero pi-mean");
  const PiInnerProduct inner(pi);
  SpectralMeasure m;
  m.atoms.reserve(dec.size());
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const double c = inner(f.f, dec.eigenvectors[i]);
    m.atoms.push_back({dec.eigenvalues[static_cast<Eigen::Index>(i)], c * c});
  }
  return m;
}

VarianceResult variance_from_measure(const SpectralMeasure& measure) {
  VarianceResult out;
  out.method = VarianceMethod::Spectral;
  out.weight_near_one = measure.mass_near_one();
  double value = 0.0;
  for (const auto& atom : measure.atoms) {
    if (atom.lambda > 1.0 - tol::kOne) {
      if (atom.weight > tol::kMass) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
      continue;
    }
    // (1 + lambda) / (1 - lambda) vanishes at -1.
    if (atom.lambda <= -1.0) continue;
    value += atom.weight * (1.0 + atom.lambda) / (1.0 - atom.lambda);
  }
  out.value = std::max(value, 0.0);
  return out;
}

VarianceResult asymptotic_variance_spectral(const Observable& f, const TransitionKernel& k,
                                            const StationaryDistribution& pi) {
  require_reversible(k, pi);
  require_irreducible(k);
  const auto dec = eigendecompose_restricted(k, pi);
  return variance_from_measure(spectral_measure(center_observable(f, pi), dec, pi));
}

AutocovarianceSequence lag_autocovariance(const Observable& f, const TransitionKernel& k,
                                          const StationaryDistribution& pi, std::size_t kmax) {
  require_dimension(k, pi);
  const Observable f0 = f.centered ? f : center_observable(f, pi);
  const PiInnerProduct inner(pi);
  AutocovarianceSequence seq;
  seq.gammas.reserve(kmax + 1);
  Vector moved = f0.f;
  seq.gammas.push_back(inner(f0.f, moved));
  for (std::size_t lag = 1; lag <= kmax; ++lag) {
    moved = k.matrix() * moved;
    seq.gammas.push_back(inner(f0.f, moved));
  }
  return seq;
}

VarianceResult asymptotic_variance_autocov(const Observable& f, const TransitionKernel& k,
                                           const StationaryDistribution& pi, double tail_tol) {
  if (!(tail_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail tolerance must be positive");
  require_reversible(k, pi);
  require_irreducible(k);
  const Observable f0 = center_observable(f, pi);
  const auto dec = eigendecompose_restricted(k, pi);
  const auto measure = spectral_measure(f0, dec, pi);

  double rho = dec.spectral_radius();
  if (compute_period(k).period >= 2) {
    // Periodic kernels: the lag sum still converges when f avoids the
    // eigenvalue -1, with rate set by the atoms f actually charges.
    if (measure.mass_near_minus_one() > tol::kMass)
      throw Error(ErrorCode::NotAperiodic,
                  "periodic kernel and the observable has spectral mass at -1");
    rho = 0.0;
    for (const auto& atom : measure.atoms)
      if (atom.weight > tol::kMass) rho = std::max(rho, std::abs(atom.lambda));
  }
  if (rho >= 1.0 - tol::kOne)
    throw Error(ErrorCode::SpectralRadiusOne, "spectral radius too close to 1 for a truncated lag sum");

  const PiInnerProduct inner(pi);
  const double gamma0 = inner.norm_squared(f0.f);
  const auto bound = [&](std::size_t lags) {
    return 2.0 * gamma0 * std::pow(rho, static_cast<double>(lags + 1)) / (1.0 - rho);
  };

  std::size_t lags = 0;
  if (gamma0 > 0.0 && rho > 0.0 && bound(0) > tail_tol) {
    const double estimate =
        std::log(tail_tol * (1.0 - rho) / (2.0 * gamma0)) / std::log(rho) - 1.0;
    lags = static_cast<std::size_t>(std::max(0.0, std::ceil(estimate)));
    while (bound(lags) > tail_tol) ++lags;
    while (lags > 0 && bound(lags - 1) <= tail_tol) --lags;
  }

  const auto seq = lag_autocovariance(f0, k, pi, lags);
  double value = seq.gammas.front();
  for (std::size_t i = 1; i < seq.gammas.size(); ++i) value += 2.0 * seq.gammas[i];

  VarianceResult out;
  out.method = VarianceMethod::Autocov;
  out.value = std::max(value, 0.0);
  out.weight_near_one = measure.mass_near_one();
  out.truncation_bound = gamma0 > 0.0 ? bound(lags) : 0.0;
  out.lags = lags;
  return out;
}

}  // namespace effdom
