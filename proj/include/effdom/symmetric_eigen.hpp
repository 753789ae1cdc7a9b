#pragma once

#include "effdom/kernel.hpp"

namespace effdom {

struct SymmetricEigen {
  Vector values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values[i], orthonormal
  int sweeps = 0;
};

/// Cyclic Jacobi with threshold pivoting. Only the upper triangle of `a` is
/// read after symmetrisation by the caller. Throws EigensolverFailure if the
/// off-diagonal mass does not vanish within `max_sweeps`.
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, int max_sweeps = 100);

/// Columns form an orthonormal basis of the complement of the unit vector
/// `u` (n x (n-1)), built from a Householder reflector mapping e_0 to u.
Eigen::MatrixXd complement_basis(const Vector& u);

/// Eigenvalues of the symmetric matrix `a` restricted to the complement of
/// the unit vector `u`, ascending.
Vector restricted_eigenvalues(const Eigen::MatrixXd& a, const Vector& u);

}  // namespace effdom
