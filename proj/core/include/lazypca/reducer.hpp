#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lazypca/projection.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

enum class ReducerMethod { rp, spca, lazy_spca };

std::string to_string(ReducerMethod m);
ReducerMethod reducer_method_from_string(const std::string& text);

// Everything a reduction run depends on. The projection spec nested here fixes
// the sketch bit for bit; k is the output dimensionality, l >= k the sketch
// width. block_rows > 0 (or streaming = true) selects the streaming variants.
struct ReducerConfig {
  ReducerMethod method = ReducerMethod::spca;
  index_t k = 0;
  index_t l = 0;  // 0 means "same as k"
  ProjectionSpec projection;
  index_t block_rows = 0;
  bool streaming = false;
  bool deterministic = true;  // accepted for manifest compatibility; reductions
                              // here are deterministic in either mode

  // Fills defaults (l from k, projection.n/l from the data and this config)
  // and validates everything against the data dimensionality.
  ReducerConfig resolved(index_t data_cols) const;
};

// The sketch U = X * Omega (m x l). Full column rank is required downstream
// and is detected where it is consumed: QR factorization for the orthonormal
// route, the Gram eigensolve for the premature-truncation route.
struct SketchMatrix {
  DenseMatrix u;
};

SketchMatrix build_sketch(const SparseMatrix& x, const ProjectionMatrix& omega);

// The deliverable of every method: a linear map v (n x k) plus the identifying
// metadata. apply_map(m, X) = X * v. singular_values accompany the spectral
// methods and stay empty for plain random projection.
struct ReductionMap {
  std::string method;
  index_t k = 0;
  index_t l = 0;
  index_t n = 0;
  std::uint64_t seed = 0;
  double density = 1.0;
  double scale = 1.0;  // the projection's variance constant c
  DenseMatrix v;
  std::vector<double> singular_values;
};

// Wall-clock seconds per phase, filled by the reducers when requested.
struct ReducerTimings {
  double sketch = 0.0;
  double qr = 0.0;
  double f_form = 0.0;
  double svd = 0.0;
  double total = 0.0;
};

// In-core reductions.
ReductionMap reduce_rp(const SparseMatrix& x, const ReducerConfig& config,
                       ReducerTimings* timings = nullptr);
ReductionMap reduce_spca(const SparseMatrix& x, const ReducerConfig& config,
                         ReducerTimings* timings = nullptr);
ReductionMap reduce_lazy_spca(const SparseMatrix& x, const ReducerConfig& config,
                              ReducerTimings* timings = nullptr);

// Streaming reductions over row blocks; only one block plus the running
// factors is resident. The orthonormal route carries (R, F) and applies the
// final R^{-T} correction; the premature-truncation route accumulates F alone,
// through the same kernel as the in-core path, so a single-block stream
// reproduces the in-core F bitwise. Rank deficiencies are annotated with the
// slice index that exposed them.
ReductionMap reduce_spca_streaming(RowBlockStream& blocks, const ReducerConfig& config,
                                   ReducerTimings* timings = nullptr);
ReductionMap reduce_lazy_spca_streaming(RowBlockStream& blocks, const ReducerConfig& config,
                                        ReducerTimings* timings = nullptr);

// Dispatch on method and streaming mode (in-memory data).
ReductionMap reduce(const SparseMatrix& x, const ReducerConfig& config,
                    ReducerTimings* timings = nullptr);

// Y = X * v (m x k).
DenseMatrix apply_map(const ReductionMap& map, const SparseMatrix& x);

// One JSON header line with the identifying metadata, then the map as a
// Matrix Market array payload. Byte-stable for equal maps.
void save_map(const ReductionMap& map, std::ostream& out);
void save_map_file(const ReductionMap& map, const std::string& path);
ReductionMap load_map(std::istream& in);
ReductionMap load_map_file(const std::string& path);

}  // namespace lazypca
