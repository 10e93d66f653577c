#pragma once

#include <vector>

#include "lazypca/dense_matrix.hpp"

namespace lazypca {

// Thin SVD: u is m x min(m,n), v is n x min(m,n), singular values descending.
struct SVDResult {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix v;
};

// One-sided Jacobi SVD. Orthogonalizes columns by plane rotations until every
// column pair is numerically orthogonal. Slow but self-contained and very
// accurate; serves as the reference decomposition for desk-scale matrices and
// as the cross-check against the Gram-based truncated SVD, with which it shares
// no code path.
SVDResult jacobi_svd(const DenseMatrix& a);

}  // namespace lazypca
