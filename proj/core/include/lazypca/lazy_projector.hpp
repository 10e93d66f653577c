#pragma once

#include "lazypca/dense_matrix.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
// with the triangular and full solves needed for Gram systems.
class Cholesky {
 public:
  // Throws RankDeficiencyError (naming the pivot) if a diagonal pivot falls at
  // or below 1e-14 times the largest input diagonal.
  explicit Cholesky(const DenseMatrix& g);

  const DenseMatrix& lower() const { return l_; }

  // b <- G^{-1} b, column by column (forward then back substitution).
  void solve_in_place(DenseMatrix& b) const;

  // b <- L^{-1} b. Useful because ||L^{-1} F||_F^2 equals the energy of the
  // projection of F's column space onto range(U) when G = U^T U and F = U^T X.
  void solve_lower_in_place(DenseMatrix& b) const;

 private:
  DenseMatrix l_;
};

// The oblique-looking but orthogonal projection of X onto range(U): computes
// U (U^T U)^{-1} U^T X without ever forming the m x m projector. One step of
// iterative refinement on the Gram solve keeps the result accurate when U is
// far from orthonormal. Returns a dense m x n matrix, so this is intended for
// moderate sizes (verification and metrics, not the streaming path).
DenseMatrix apply_lazy_projector(const DenseMatrix& u, const SparseMatrix& x);

}  // namespace lazypca
