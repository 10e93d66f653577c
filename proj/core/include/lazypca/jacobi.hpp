#pragma once

#include <vector>

#include "lazypca/dense_matrix.hpp"

namespace lazypca {

// Eigenvalues sorted descending; eigenvectors[:, i] belongs to eigenvalues[i]
// and the matrix is orthogonal.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
};

// Cyclic Jacobi rotations for a symmetric matrix. Pairs are visited in a fixed
// round-robin schedule (each sweep touches every pair once); rotations below
// a fraction of the convergence threshold are skipped, which makes the final
// sweeps nearly free without affecting the reachable accuracy. Terminates when
// the largest off-diagonal magnitude is at most 1e-14 * ||A||_F; gives up with
// a ConvergenceError after 50 sweeps. Input must be symmetric to within
// 1e-10 * ||A||_F.
EigenDecomposition jacobi_eigh(const DenseMatrix& a);

}  // namespace lazypca
