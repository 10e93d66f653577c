#include "lazypca/truncated_svd.hpp"

#include <cmath>
#include <string>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/tridiag_eigh.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

TruncatedSVD truncated_svd_via_gram(const DenseMatrix& f, index_t k) {
  const index_t l = f.rows();
  const index_t n = f.cols();
  if (l > n)
    throw DimensionError("truncated_svd_via_gram: F must be wide (l <= n), got " +
                         std::to_string(l) + "x" + std::to_string(n));
  if (k < 1 || k > l)
    throw InvalidArgumentError("truncated_svd_via_gram: need 1 <= k <= l, got k = " +
                               std::to_string(k));

  const DenseMatrix gram = dense_aat(f);
  // Tridiagonal QL rather than Jacobi: the Gram edge follows the sketch width,
  // and once that reaches the hundreds the sweeps-times-l^3 Jacobi cost would
  // swamp the very phase this factorization is meant to keep cheap.
  EigenDecomposition eig = tridiag_eigh(gram);
  const double lambda_max = eig.eigenvalues.front();
  const double floor = 1e-12 * (lambda_max > 0.0 ? lambda_max : 0.0);

  index_t safe = 0;
  while (safe < l && eig.eigenvalues[static_cast<std::size_t>(safe)] > floor &&
         eig.eigenvalues[static_cast<std::size_t>(safe)] > 0.0)
    ++safe;
  if (k > safe)
    throw RankDeficiencyError("truncated_svd_via_gram: requested rank " + std::to_string(k) +
                                  " exceeds the numerical rank; largest safe k = " +
                                  std::to_string(safe),
                              safe);

  TruncatedSVD out;
  out.u_tilde = DenseMatrix(l, k);
  out.singular_values.resize(static_cast<std::size_t>(k));
  for (index_t r = 0; r < k; ++r) {
    out.singular_values[static_cast<std::size_t>(r)] =
        std::sqrt(eig.eigenvalues[static_cast<std::size_t>(r)]);
    const double* src = eig.eigenvectors.col(r);
    double* dst = out.u_tilde.col(r);
    for (index_t i = 0; i < l; ++i) dst[i] = src[i];
  }

  // v = F^T u_tilde diag(d)^{-1}, one row per column of F.
  out.v = DenseMatrix(n, k);
  parallel_for(0, n, [&](index_t j) {
    const double* fcol = f.col(j);
    for (index_t r = 0; r < k; ++r) {
      const double* ucol = out.u_tilde.col(r);
      double dot = 0.0;
      for (index_t i = 0; i < l; ++i) dot += fcol[i] * ucol[i];
      out.v(j, r) = dot / out.singular_values[static_cast<std::size_t>(r)];
    }
  }, 64);

  // Canonical signs: dominant entry of each v column made non-negative.
  for (index_t r = 0; r < k; ++r) {
    index_t arg = 0;
    double best = -1.0;
    for (index_t j = 0; j < n; ++j) {
      const double mag = std::abs(out.v(j, r));
      if (mag > best) {
        best = mag;
        arg = j;
      }
    }
    if (out.v(arg, r) < 0.0) {
      for (index_t j = 0; j < n; ++j) out.v(j, r) = -out.v(j, r);
      double* ucol = out.u_tilde.col(r);
      for (index_t i = 0; i < l; ++i) ucol[i] = -ucol[i];
    }
  }
  return out;
}

}  // namespace lazypca
