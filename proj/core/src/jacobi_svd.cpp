#include "lazypca/jacobi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lazypca/error.hpp"

namespace lazypca {

namespace {

SVDResult svd_tall(const DenseMatrix& a) {
  const index_t m = a.rows();
  const index_t n = a.cols();
  DenseMatrix b = a;
  DenseMatrix v = DenseMatrix::identity(n);

  constexpr double tol = 1e-14;
  constexpr int max_sweeps = 60;
  bool rotated = true;
  int sweep = 0;
  double worst = 0.0;
  while (rotated) {
    if (sweep++ >= max_sweeps)
      throw ConvergenceError("jacobi_svd: column pairs still coupled (relative inner product " +
                                 std::to_string(worst) + ") after " + std::to_string(max_sweeps) +
                                 " sweeps",
                             worst);
    rotated = false;
    worst = 0.0;
    for (index_t p = 0; p < n - 1; ++p) {
      for (index_t q = p + 1; q < n; ++q) {
        double* bp = b.col(p);
        double* bq = b.col(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (index_t i = 0; i < m; ++i) {
          alpha += bp[i] * bp[i];
          beta += bq[i] * bq[i];
          gamma += bp[i] * bq[i];
        }
        if (alpha == 0.0 || beta == 0.0) continue;  // exhausted column
        const double rel = std::abs(gamma) / std::sqrt(alpha * beta);
        worst = std::max(worst, rel);
        if (rel <= tol) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = zeta >= 0.0 ? 1.0 / (zeta + std::sqrt(zeta * zeta + 1.0))
                                     : -1.0 / (-zeta + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = c * t;
        for (index_t i = 0; i < m; ++i) {
          const double x = bp[i];
          const double y = bq[i];
          bp[i] = c * x - s * y;
          bq[i] = s * x + c * y;
        }
        double* vp = v.col(p);
        double* vq = v.col(q);
        for (index_t i = 0; i < n; ++i) {
          const double x = vp[i];
          const double y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
  }

  std::vector<double> norms(static_cast<std::size_t>(n));
  for (index_t j = 0; j < n; ++j) {
    double sum = 0.0;
    const double* bj = b.col(j);
    for (index_t i = 0; i < m; ++i) sum += bj[i] * bj[i];
    norms[static_cast<std::size_t>(j)] = std::sqrt(sum);
  }
  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
    return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)];
  });

  SVDResult out;
  out.u = DenseMatrix(m, n);
  out.v = DenseMatrix(n, n);
  out.singular_values.resize(static_cast<std::size_t>(n));
  for (index_t r = 0; r < n; ++r) {
    const index_t src = order[static_cast<std::size_t>(r)];
    const double sigma = norms[static_cast<std::size_t>(src)];
    out.singular_values[static_cast<std::size_t>(r)] = sigma;
    const double* bcol = b.col(src);
    double* ucol = out.u.col(r);
    if (sigma > 0.0)
      for (index_t i = 0; i < m; ++i) ucol[i] = bcol[i] / sigma;
    const double* vcol = v.col(src);
    double* ocol = out.v.col(r);
    for (index_t i = 0; i < n; ++i) ocol[i] = vcol[i];
  }
  return out;
}

}  // namespace

SVDResult jacobi_svd(const DenseMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1)
    throw InvalidArgumentError("jacobi_svd: matrix must be non-empty");
  if (a.rows() >= a.cols()) return svd_tall(a);
  SVDResult t = svd_tall(a.transposed());
  SVDResult out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.singular_values = std::move(t.singular_values);
  return out;
}

}  // namespace lazypca
