#pragma once

#include <vector>

#include "lazypca/dense_matrix.hpp"

namespace lazypca {

// Rank-k factors of a wide matrix F (l x n, l <= n): F ~= u_tilde * diag(d) * v^T
// with u_tilde l x k (left singular vectors of F), d the top k singular values
// descending, v n x k with orthonormal columns. Column signs are canonical:
// in each v column the entry of largest magnitude is non-negative (first index
// wins ties), and u_tilde is flipped alongside so the product is unchanged.
struct TruncatedSVD {
  DenseMatrix u_tilde;
  std::vector<double> singular_values;
  DenseMatrix v;
};

// Computes the factors through the small Gram matrix: G = F F^T (l x l) is
// eigendecomposed, d = sqrt of the top eigenvalues, and v = F^T u_tilde d^{-1}.
// Never touches an n x n object. Reports rank deficiency (naming the largest
// safe k) when the k-th eigenvalue falls at or below 1e-12 times the largest.
TruncatedSVD truncated_svd_via_gram(const DenseMatrix& f, index_t k);

}  // namespace lazypca
