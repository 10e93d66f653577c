#include "lazypca/spectral_norm.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/rng.hpp"

namespace lazypca {

namespace {

double norm2(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

double spectral_norm(const SpectralOperator& op, double abs_tol) {
  if (op.rows < 1 || op.cols < 1)
    throw InvalidArgumentError("spectral_norm: operator must be non-empty");

  // Deterministic start vector; the constant is arbitrary but never changes.
  Xoshiro256 rng(0x5eed0f0e57a7ULL);
  std::vector<double> v(static_cast<std::size_t>(op.cols));
  for (double& x : v) x = rng.uniform() - 0.5;
  const double vn = norm2(v);
  if (vn == 0.0) return 0.0;  // cannot happen with the generator above
  for (double& x : v) x /= vn;

  std::vector<double> av(static_cast<std::size_t>(op.rows));
  constexpr int max_iters = 10000;
  constexpr double rel_tol = 1e-8;
  double estimate = 0.0;
  double gap = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    op.apply(v.data(), av.data());
    const double sigma = norm2(av);
    if (sigma == 0.0) return 0.0;  // start vector lies in the null space; A v = 0
    // Below abs_tol the operator is indistinguishable from zero: the iterates
    // are rounding noise and the relative criterion can chase them forever.
    if (sigma <= abs_tol) return sigma;
    gap = std::abs(sigma - estimate);
    if (it > 0 && gap <= rel_tol * sigma + abs_tol) return sigma;
    estimate = sigma;
    op.apply_t(av.data(), v.data());
    const double wn = norm2(v);
    if (wn == 0.0) return sigma;
    for (double& x : v) x /= wn;
  }
  throw ConvergenceError("spectral_norm: estimate gap " + std::to_string(gap) +
                             " still above relative " + std::to_string(rel_tol) + " after " +
                             std::to_string(max_iters) + " iterations",
                         gap);
}

double spectral_norm(const DenseMatrix& a) {
  SpectralOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [&a](const double* x, double* y) {
    for (index_t i = 0; i < a.rows(); ++i) y[i] = 0.0;
    for (index_t j = 0; j < a.cols(); ++j) {
      const double w = x[j];
      if (w == 0.0) continue;
      const double* col = a.col(j);
      for (index_t i = 0; i < a.rows(); ++i) y[i] += w * col[i];
    }
  };
  op.apply_t = [&a](const double* x, double* y) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double* col = a.col(j);
      double dot = 0.0;
      for (index_t i = 0; i < a.rows(); ++i) dot += col[i] * x[i];
      y[j] = dot;
    }
  };
  return spectral_norm(op);
}

double spectral_norm(const SparseMatrix& a) {
  SpectralOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [&a](const double* x, double* y) { spmv(a, x, y); };
  op.apply_t = [&a](const double* x, double* y) { spmv_t(a, x, y); };
  return spectral_norm(op);
}

}  // namespace lazypca
