#pragma once

namespace effdom::tol {

// Row sums, weight sums, distribution normalisation.
inline constexpr double kSum = 1e-12;
// Detailed balance and stationarity, relative to the largest flux pi_x p[x,y].
inline constexpr double kReversible = 1e-10;
// An entry above this is an edge of the support digraph.
inline constexpr double kEdge = 1e-14;
// |E_pi f| for a centered observable, relative to max(1, max|f|).
inline constexpr double kCenter = 1e-12;
// Distance to lambda = 1 treated as "at 1".
inline constexpr double kOne = 1e-9;
// Spectral mass below this is treated as absent.
inline constexpr double kMass = 1e-9;
// Positivity band for operator differences, relative to max(1, ||Q - P||).
inline constexpr double kPositive = 1e-8;
// Off-diagonal slack for the Peskun entrywise comparison.
inline constexpr double kPeskun = 1e-12;
// Eigenpair residual contract of the restricted decomposition.
inline constexpr double kResidual = 1e-9;
// Orthonormality contract of the restricted decomposition.
inline constexpr double kOrthonormal = 1e-10;

}  // namespace effdom::tol
