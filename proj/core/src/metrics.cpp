#include "lazypca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "lazypca/error.hpp"
#include "lazypca/jacobi_svd.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/lazy_projector.hpp"
#include "lazypca/qr.hpp"
#include "lazypca/rng.hpp"
#include "lazypca/spectral_norm.hpp"

namespace lazypca {

namespace {

void check_orthonormal(const DenseMatrix& v, const char* which) {
  const DenseMatrix gram = dense_at_b(v, v);
  double worst = 0.0;
  for (index_t j = 0; j < gram.cols(); ++j)
    for (index_t i = 0; i < gram.rows(); ++i)
      worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  if (worst > 1e-8 * static_cast<double>(std::max<index_t>(1, v.cols())))
    throw InvalidArgumentError(std::string("chordal_distance: ") + which +
                               " does not have orthonormal columns (max deviation " +
                               std::to_string(worst) + ")");
}

double frob2(const DenseMatrix& a) {
  double sum = 0.0;
  const double* d = a.data();
  const std::size_t count = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
  for (std::size_t i = 0; i < count; ++i) sum += d[i] * d[i];
  return sum;
}

// Compressed sparse row view for pairwise row distances.
struct CsrView {
  std::vector<index_t> row_ptr, col_idx;
  std::vector<double> values;
};

CsrView build_csr(const SparseMatrix& x) {
  CsrView out;
  out.row_ptr.assign(static_cast<std::size_t>(x.rows()) + 1, 0);
  out.col_idx.resize(static_cast<std::size_t>(x.nnz()));
  out.values.resize(static_cast<std::size_t>(x.nnz()));
  const auto& ptr = x.col_ptr();
  const auto& idx = x.row_idx();
  const auto& val = x.values();
  for (index_t p = 0; p < x.nnz(); ++p) ++out.row_ptr[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)]) + 1];
  for (index_t i = 0; i < x.rows(); ++i)
    out.row_ptr[static_cast<std::size_t>(i) + 1] += out.row_ptr[static_cast<std::size_t>(i)];
  std::vector<index_t> cursor(out.row_ptr.begin(), out.row_ptr.end() - 1);
  for (index_t j = 0; j < x.cols(); ++j)
    for (index_t p = ptr[static_cast<std::size_t>(j)]; p < ptr[static_cast<std::size_t>(j) + 1]; ++p) {
      const index_t i = idx[static_cast<std::size_t>(p)];
      const index_t slot = cursor[static_cast<std::size_t>(i)]++;
      out.col_idx[static_cast<std::size_t>(slot)] = j;  // ascending: columns visited in order
      out.values[static_cast<std::size_t>(slot)] = val[static_cast<std::size_t>(p)];
    }
  return out;
}

double sparse_row_distance(const CsrView& csr, index_t a, index_t b) {
  index_t pa = csr.row_ptr[static_cast<std::size_t>(a)];
  const index_t ea = csr.row_ptr[static_cast<std::size_t>(a) + 1];
  index_t pb = csr.row_ptr[static_cast<std::size_t>(b)];
  const index_t eb = csr.row_ptr[static_cast<std::size_t>(b) + 1];
  double sum = 0.0;
  while (pa < ea && pb < eb) {
    const index_t ca = csr.col_idx[static_cast<std::size_t>(pa)];
    const index_t cb = csr.col_idx[static_cast<std::size_t>(pb)];
    double d;
    if (ca == cb) {
      d = csr.values[static_cast<std::size_t>(pa++)] - csr.values[static_cast<std::size_t>(pb++)];
    } else if (ca < cb) {
      d = csr.values[static_cast<std::size_t>(pa++)];
    } else {
      d = -csr.values[static_cast<std::size_t>(pb++)];
    }
    sum += d * d;
  }
  for (; pa < ea; ++pa) sum += csr.values[static_cast<std::size_t>(pa)] * csr.values[static_cast<std::size_t>(pa)];
  for (; pb < eb; ++pb) sum += csr.values[static_cast<std::size_t>(pb)] * csr.values[static_cast<std::size_t>(pb)];
  return std::sqrt(sum);
}

double dense_row_distance(const DenseMatrix& y, index_t a, index_t b) {
  double sum = 0.0;
  for (index_t c = 0; c < y.cols(); ++c) {
    const double d = y(a, c) - y(b, c);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

namespace {

// ||a - b (b^T a)||_F^2: how much of a's basis falls outside span(b). The
// residual is formed entrywise before squaring, so the result keeps full
// precision even when the spans nearly coincide.
double residual_frob2(const DenseMatrix& a, const DenseMatrix& b) {
  const DenseMatrix coeffs = dense_at_b(b, a);
  const DenseMatrix inside = dense_gemm(b, coeffs);
  double sum = 0.0;
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = 0; i < a.rows(); ++i) {
      const double r = a(i, j) - inside(i, j);
      sum += r * r;
    }
  return sum;
}

}  // namespace

double chordal_distance(const DenseMatrix& v1, const DenseMatrix& v2) {
  if (v1.rows() != v2.rows())
    throw DimensionError("chordal_distance: bases live in different dimensions (" +
                         std::to_string(v1.rows()) + " vs " + std::to_string(v2.rows()) + ")");
  check_orthonormal(v1, "first basis");
  check_orthonormal(v2, "second basis");
  // ||P1 - P2||_F^2 = k1 + k2 - 2 ||V1^T V2||_F^2, but that difference of
  // near-equal squares drowns distances below ~1e-7 in rounding noise. The
  // algebraically identical residual form
  //   ||V1 - V2 (V2^T V1)||_F^2 + ||V2 - V1 (V1^T V2)||_F^2
  // has no cancellation, and adding the two terms makes the distance exactly
  // symmetric in its arguments (IEEE addition commutes).
  return std::sqrt(residual_frob2(v1, v2) + residual_frob2(v2, v1));
}

double bound_value(index_t m, index_t n, index_t k, index_t l, double sigma_k_plus_1) {
  if (k < 1 || l < k + 2)
    throw InvalidArgumentError("bound_value: needs l >= k + 2 (got k = " + std::to_string(k) +
                               ", l = " + std::to_string(l) + ")");
  const double minmn = static_cast<double>(std::min(m, n));
  const double factor =
      1.0 + 4.0 * std::sqrt(static_cast<double>(l)) / static_cast<double>(l - k - 1) * std::sqrt(minmn);
  return factor * sigma_k_plus_1;
}

ReconstructionErrorReport reconstruction_error(const SparseMatrix& x, const DenseMatrix& u,
                                               ResidualRoute route, index_t k, index_t l,
                                               bool with_bound, index_t densify_limit) {
  if (u.rows() != x.rows())
    throw DimensionError("reconstruction_error: U has " + std::to_string(u.rows()) +
                         " rows but X has " + std::to_string(x.rows()));
  if (u.cols() != l)
    throw DimensionError("reconstruction_error: U has " + std::to_string(u.cols()) +
                         " columns but l = " + std::to_string(l));

  ReconstructionErrorReport out;
  const double x_frob2 = [&] {
    double s = 0.0;
    for (double v : x.values()) s += v * v;
    return s;
  }();

  SpectralOperator op;
  op.rows = x.rows();
  op.cols = x.cols();

  if (route == ResidualRoute::qr) {
    const QRFactors qr = householder_qr(u);
    const DenseMatrix f = gemm_t(qr.q, x);  // Q^T X
    out.frobenius_error = std::sqrt(std::max(0.0, x_frob2 - frob2(f)));

    const DenseMatrix& q = qr.q;
    std::vector<double> t(static_cast<std::size_t>(x.rows()));
    std::vector<double> s(static_cast<std::size_t>(l));
    op.apply = [&x, &q, t, s, l](const double* in, double* y) mutable {
      spmv(x, in, t.data());
      for (index_t r = 0; r < l; ++r) {
        const double* qc = q.col(r);
        double dot = 0.0;
        for (index_t i = 0; i < q.rows(); ++i) dot += qc[i] * t[static_cast<std::size_t>(i)];
        s[static_cast<std::size_t>(r)] = dot;
      }
      for (index_t i = 0; i < q.rows(); ++i) {
        double acc = t[static_cast<std::size_t>(i)];
        for (index_t r = 0; r < l; ++r) acc -= q(i, r) * s[static_cast<std::size_t>(r)];
        y[i] = acc;
      }
    };
    op.apply_t = [&x, &q, t, s, l](const double* in, double* y) mutable {
      for (index_t r = 0; r < l; ++r) {
        const double* qc = q.col(r);
        double dot = 0.0;
        for (index_t i = 0; i < q.rows(); ++i) dot += qc[i] * in[i];
        s[static_cast<std::size_t>(r)] = dot;
      }
      for (index_t i = 0; i < q.rows(); ++i) {
        double acc = in[i];
        for (index_t r = 0; r < l; ++r) acc -= q(i, r) * s[static_cast<std::size_t>(r)];
        t[static_cast<std::size_t>(i)] = acc;
      }
      spmv_t(x, t.data(), y);
    };
    out.spectral_error = spectral_norm(op, 1e-14 * std::sqrt(x_frob2));
  } else {
    const DenseMatrix gram = dense_at_b(u, u);
    const Cholesky chol(gram);
    DenseMatrix f = gemm_t(u, x);  // U^T X
    {
      DenseMatrix half = f;
      chol.solve_lower_in_place(half);  // ||L^{-1} F||_F^2 = ||P X||_F^2
      out.frobenius_error = std::sqrt(std::max(0.0, x_frob2 - frob2(half)));
    }

    std::vector<double> t(static_cast<std::size_t>(x.rows()));
    DenseMatrix s(l, 1);
    op.apply = [&x, &u, &chol, t, s, l](const double* in, double* y) mutable {
      spmv(x, in, t.data());
      for (index_t r = 0; r < l; ++r) {
        const double* uc = u.col(r);
        double dot = 0.0;
        for (index_t i = 0; i < u.rows(); ++i) dot += uc[i] * t[static_cast<std::size_t>(i)];
        s(r, 0) = dot;
      }
      chol.solve_in_place(s);
      for (index_t i = 0; i < u.rows(); ++i) {
        double acc = t[static_cast<std::size_t>(i)];
        for (index_t r = 0; r < l; ++r) acc -= u(i, r) * s(r, 0);
        y[i] = acc;
      }
    };
    op.apply_t = [&x, &u, &chol, t, s, l](const double* in, double* y) mutable {
      for (index_t r = 0; r < l; ++r) {
        const double* uc = u.col(r);
        double dot = 0.0;
        for (index_t i = 0; i < u.rows(); ++i) dot += uc[i] * in[i];
        s(r, 0) = dot;
      }
      chol.solve_in_place(s);
      for (index_t i = 0; i < u.rows(); ++i) {
        double acc = in[i];
        for (index_t r = 0; r < l; ++r) acc -= u(i, r) * s(r, 0);
        t[static_cast<std::size_t>(i)] = acc;
      }
      spmv_t(x, t.data(), y);
    };
    out.spectral_error = spectral_norm(op, 1e-14 * std::sqrt(x_frob2));
  }

  if (with_bound && l >= k + 2 && std::max(x.rows(), x.cols()) <= densify_limit) {
    const SVDResult ref = jacobi_svd(x.to_dense());
    if (static_cast<index_t>(ref.singular_values.size()) > k) {
      out.sigma_k_plus_1 = ref.singular_values[static_cast<std::size_t>(k)];
      out.bound = bound_value(x.rows(), x.cols(), k, l, *out.sigma_k_plus_1);
    }
  }
  return out;
}

ReconstructionErrorReport row_space_reconstruction_error(const SparseMatrix& x,
                                                         const DenseMatrix& v) {
  if (x.cols() != v.rows())
    throw DimensionError("row_space_reconstruction_error: X has " + std::to_string(x.cols()) +
                         " columns but V has " + std::to_string(v.rows()) + " rows");
  check_orthonormal(v, "basis");
  ReconstructionErrorReport out;
  double x_frob2 = 0.0;
  for (double w : x.values()) x_frob2 += w * w;
  const DenseMatrix xv = spmm(x, v);
  out.frobenius_error = std::sqrt(std::max(0.0, x_frob2 - frob2(xv)));

  const index_t kdim = v.cols();
  SpectralOperator op;
  op.rows = x.rows();
  op.cols = x.cols();
  std::vector<double> w(static_cast<std::size_t>(x.cols()));
  std::vector<double> s(static_cast<std::size_t>(kdim));
  op.apply = [&x, &v, w, s, kdim](const double* in, double* y) mutable {
    for (index_t r = 0; r < kdim; ++r) {
      const double* vc = v.col(r);
      double dot = 0.0;
      for (index_t i = 0; i < v.rows(); ++i) dot += vc[i] * in[i];
      s[static_cast<std::size_t>(r)] = dot;
    }
    for (index_t i = 0; i < v.rows(); ++i) {
      double acc = in[i];
      for (index_t r = 0; r < kdim; ++r) acc -= v(i, r) * s[static_cast<std::size_t>(r)];
      w[static_cast<std::size_t>(i)] = acc;
    }
    spmv(x, w.data(), y);
  };
  op.apply_t = [&x, &v, w, s, kdim](const double* in, double* y) mutable {
    spmv_t(x, in, w.data());
    for (index_t r = 0; r < kdim; ++r) {
      const double* vc = v.col(r);
      double dot = 0.0;
      for (index_t i = 0; i < v.rows(); ++i) dot += vc[i] * w[static_cast<std::size_t>(i)];
      s[static_cast<std::size_t>(r)] = dot;
    }
    for (index_t i = 0; i < v.rows(); ++i) {
      double acc = w[static_cast<std::size_t>(i)];
      for (index_t r = 0; r < kdim; ++r) acc -= v(i, r) * s[static_cast<std::size_t>(r)];
      y[i] = acc;
    }
  };
  out.spectral_error = spectral_norm(op, 1e-14 * std::sqrt(x_frob2));
  return out;
}

DistancePreservationReport distance_preservation(const SparseMatrix& x, const ReductionMap& map_a,
                                                 const ReductionMap* map_b, index_t max_pairs,
                                                 std::uint64_t seed) {
  const index_t m = x.rows();
  if (m < 2) throw InvalidArgumentError("distance_preservation: need at least two rows");
  const DenseMatrix ya = apply_map(map_a, x);
  DenseMatrix yb;
  if (map_b) yb = apply_map(*map_b, x);
  const CsrView csr = build_csr(x);

  DistancePreservationReport out;
  const double total_pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  if (total_pairs <= static_cast<double>(max_pairs)) {
    for (index_t i = 0; i < m; ++i)
      for (index_t j = i + 1; j < m; ++j) out.pairs.push_back({i, j, 0.0, 0.0, 0.0});
  } else {
    Xoshiro256 rng(mix64(seed ^ 0x9a17b0a155a3f2c1ULL));
    out.pairs.reserve(static_cast<std::size_t>(max_pairs));
    while (static_cast<index_t>(out.pairs.size()) < max_pairs) {
      const index_t i = static_cast<index_t>(rng.next() % static_cast<std::uint64_t>(m));
      const index_t j = static_cast<index_t>(rng.next() % static_cast<std::uint64_t>(m));
      if (i == j) continue;
      out.pairs.push_back({std::min(i, j), std::max(i, j), 0.0, 0.0, 0.0});
    }
  }

  double worst_violation = -1e300;
  double worst_gap = 0.0;
  for (PairSample& p : out.pairs) {
    p.original = sparse_row_distance(csr, p.i, p.j);
    p.reduced_a = dense_row_distance(ya, p.i, p.j);
    worst_violation = std::max(worst_violation, p.reduced_a - p.original);
    if (map_b) {
      p.reduced_b = dense_row_distance(yb, p.i, p.j);
      worst_violation = std::max(worst_violation, p.reduced_b - p.original);
      worst_gap = std::max(worst_gap, std::abs(p.reduced_a - p.reduced_b));
    }
  }
  out.max_contraction_violation = worst_violation;
  out.max_map_discrepancy = worst_gap;
  return out;
}

std::string comparison_record_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["method_a"] = r.method_a;
  j["method_b"] = r.method_b;
  j["k"] = r.k;
  j["l"] = r.l;
  j["seed"] = r.seed;
  j["chordal"] = r.chordal;
  j["spectral_error"] = r.spectral_error;
  j["frobenius_error"] = r.frobenius_error;
  if (r.bound) j["bound"] = *r.bound;
  else j["bound"] = nullptr;
  j["max_contraction_violation"] = r.max_contraction_violation;
  j["max_map_discrepancy"] = r.max_map_discrepancy;
  if (r.spectral_error_b) j["spectral_error_b"] = *r.spectral_error_b;
  if (r.frobenius_error_b) j["frobenius_error_b"] = *r.frobenius_error_b;
  return j.dump();
}

}  // namespace lazypca
