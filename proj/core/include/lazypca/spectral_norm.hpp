#pragma once

#include <functional>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

// Matrix seen only through products, so residual operators like X - P X can be
// measured without materializing them.
struct SpectralOperator {
  index_t rows = 0;
  index_t cols = 0;
  std::function<void(const double* x, double* y)> apply;    // y = A x,   y has `rows` entries
  std::function<void(const double* x, double* y)> apply_t;  // y = A^T x, y has `cols` entries
};

// Largest singular value by power iteration on A^T A, started from a fixed
// seeded random vector. Converges when successive estimates agree to a relative
// 1e-8; throws ConvergenceError carrying the last gap after 10000 iterations.
// A zero operator returns 0. abs_tol is the caller's "this is numerically
// zero" scale: estimates at or below it return immediately, which keeps
// residual operators whose true norm sits under the rounding noise of their
// own application from chasing that noise forever.
double spectral_norm(const SpectralOperator& op, double abs_tol = 0.0);
double spectral_norm(const DenseMatrix& a);
double spectral_norm(const SparseMatrix& a);

}  // namespace lazypca
