#pragma once

#include "voxplane/types.hpp"

namespace voxplane {

/// Eigendecomposition of a symmetric 3x3 matrix.
/// eigenvalues are sorted ascending; eigenvectors.col(k) pairs with
/// eigenvalues[k] and the columns form a right-handed orthonormal basis.
struct EigenSym3 {
  Vec3 eigenvalues;
  Mat3 eigenvectors;
};

/// Cyclic Jacobi rotations over the (0,1), (0,2), (1,2) pivots. Sweeps stop
/// when the off-diagonal Frobenius norm drops below 1e-10 or after 30
/// sweeps. Only the symmetric part of `a` is read.
EigenSym3 jacobi_eigen_sym3(const Mat3& a);

}  // namespace voxplane
