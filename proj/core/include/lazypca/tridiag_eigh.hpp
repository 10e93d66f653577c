#pragma once

#include "lazypca/dense_matrix.hpp"
#include "lazypca/jacobi.hpp"

namespace lazypca {

// Symmetric eigensolver via Householder tridiagonalization followed by the
// implicit-shift QL iteration, with the orthogonal transform accumulated so the
// returned eigenvectors belong to the original matrix. Same contract as
// jacobi_eigh (eigenvalues descending, orthogonal eigenvector matrix, input
// symmetric to within 1e-10 * ||A||_F), but the cost is a small fixed multiple
// of l^3 instead of Jacobi's sweeps-times-l^3, which matters once the matrix
// edge reaches the hundreds. All loops stream down columns, so the large-l
// constant stays low; Jacobi remains the cross-check at small sizes.
EigenDecomposition tridiag_eigh(const DenseMatrix& a);

}  // namespace lazypca
