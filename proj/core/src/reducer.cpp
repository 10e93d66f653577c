#include "lazypca/reducer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/matrix_io.hpp"
#include "lazypca/qr.hpp"
#include "lazypca/truncated_svd.hpp"

namespace lazypca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Scoped phase timer writing into one field of ReducerTimings (if any).
class Phase {
 public:
  Phase(ReducerTimings* t, double ReducerTimings::* field) : t_(t), field_(field), t0_(Clock::now()) {}
  ~Phase() {
    if (t_) t_->*field_ += seconds_since(t0_);
  }

 private:
  ReducerTimings* t_;
  double ReducerTimings::* field_;
  Clock::time_point t0_;
};

DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw DimensionError("vstack: column counts differ");
  DenseMatrix out(top.rows() + bottom.rows(), top.cols());
  for (index_t j = 0; j < top.cols(); ++j) {
    double* dst = out.col(j);
    const double* t = top.col(j);
    for (index_t i = 0; i < top.rows(); ++i) dst[i] = t[i];
    const double* b = bottom.col(j);
    for (index_t i = 0; i < bottom.rows(); ++i) dst[top.rows() + i] = b[i];
  }
  return out;
}

// f <- R^{-T} f with R upper triangular: forward substitution down each column.
void solve_rt_in_place(const DenseMatrix& r, DenseMatrix& f) {
  const index_t l = r.rows();
  if (f.rows() != l) throw DimensionError("triangular solve: row count mismatch");
  const double tol = 1e-12 * frobenius_norm(r);
  for (index_t i = 0; i < l; ++i)
    if (std::abs(r(i, i)) <= tol)
      throw RankDeficiencyError("triangular solve: R diagonal entry " + std::to_string(i) +
                                    " is numerically zero",
                                i);
  parallel_for(0, f.cols(), [&](index_t c) {
    double* col = f.col(c);
    for (index_t i = 0; i < l; ++i) {
      const double* rcol = r.col(i);  // holds R(0..i, i)
      double v = col[i];
      for (index_t j = 0; j < i; ++j) v -= rcol[j] * col[j];
      col[i] = v / rcol[i];
    }
  }, 8);
}

ReductionMap finish_spectral(const ReducerConfig& cfg, const ProjectionMatrix& omega,
                             DenseMatrix&& f, ReducerTimings* timings) {
  Phase phase(timings, &ReducerTimings::svd);
  TruncatedSVD svd = truncated_svd_via_gram(f, cfg.k);
  ReductionMap map;
  map.method = to_string(cfg.method);
  map.k = cfg.k;
  map.l = cfg.l;
  map.n = cfg.projection.n;
  map.seed = cfg.projection.seed;
  map.density = cfg.projection.density;
  map.scale = omega.scale;
  map.v = std::move(svd.v);
  map.singular_values = std::move(svd.singular_values);
  return map;
}

struct StreamState {
  ProjectionMatrix omega;
  DenseMatrix f;       // running U^T X accumulation
  DenseMatrix r;       // running R factor (orthonormal route only)
  index_t expected_slice = 0;
  index_t seen_rows = 0;
};

// Pulls the next block, validating slice order and width.
std::optional<RowBlock> pull(RowBlockStream& blocks, StreamState& st, const ReducerConfig& cfg) {
  auto blk = blocks.next();
  if (!blk) return std::nullopt;
  if (blk->slice_index != st.expected_slice)
    throw InvalidArgumentError("streaming: expected slice " + std::to_string(st.expected_slice) +
                               ", got " + std::to_string(blk->slice_index));
  if (blk->block.cols() != cfg.projection.n)
    throw DimensionError("streaming: block has " + std::to_string(blk->block.cols()) +
                         " columns but the projection expects " + std::to_string(cfg.projection.n));
  ++st.expected_slice;
  st.seen_rows += blk->block.rows();
  return blk;
}

DenseMatrix sketch_block(const SparseMatrix& block, const ProjectionMatrix& omega) {
  return omega.is_dense() ? spmm(block, omega.dense()) : spmm(block, omega.sparse());
}

}  // namespace

std::string to_string(ReducerMethod m) {
  switch (m) {
    case ReducerMethod::rp: return "rp";
    case ReducerMethod::spca: return "spca";
    case ReducerMethod::lazy_spca: return "lazy_spca";
  }
  return "spca";
}

ReducerMethod reducer_method_from_string(const std::string& text) {
  if (text == "rp") return ReducerMethod::rp;
  if (text == "spca") return ReducerMethod::spca;
  if (text == "lazy_spca") return ReducerMethod::lazy_spca;
  throw InvalidArgumentError("unknown method '" + text + "' (expected rp, spca, or lazy_spca)");
}

ReducerConfig ReducerConfig::resolved(index_t data_cols) const {
  ReducerConfig out = *this;
  if (out.k < 1) throw InvalidArgumentError("reducer: k must be at least 1, got " + std::to_string(out.k));
  if (out.l == 0) out.l = out.k;
  if (out.k > out.l)
    throw InvalidArgumentError("reducer: k = " + std::to_string(out.k) + " exceeds sketch width l = " +
                               std::to_string(out.l));
  if (out.method == ReducerMethod::rp && out.k != out.l)
    throw InvalidArgumentError("reducer: random projection reduces straight to k dimensions; "
                               "l must equal k");
  if (out.block_rows > 0) out.streaming = true;
  if (out.streaming && out.block_rows < 1)
    throw InvalidArgumentError("reducer: streaming mode needs block_rows >= 1");

  if (out.projection.n == 0) out.projection.n = data_cols;
  if (out.projection.l == 0) out.projection.l = out.l;
  if (out.projection.n != data_cols)
    throw DimensionError("reducer: projection is built for n = " + std::to_string(out.projection.n) +
                         " but the data has " + std::to_string(data_cols) + " columns");
  if (out.projection.l != out.l)
    throw DimensionError("reducer: projection width " + std::to_string(out.projection.l) +
                         " does not match l = " + std::to_string(out.l));
  out.projection.validate();
  return out;
}

SketchMatrix build_sketch(const SparseMatrix& x, const ProjectionMatrix& omega) {
  const index_t n = omega.is_dense() ? omega.dense().rows() : omega.sparse().rows();
  if (x.cols() != n)
    throw DimensionError("sketch: data has " + std::to_string(x.cols()) +
                         " columns but the projection has " + std::to_string(n) + " rows");
  return SketchMatrix{sketch_block(x, omega)};
}

ReductionMap reduce_rp(const SparseMatrix& x, const ReducerConfig& config, ReducerTimings* timings) {
  const auto t0 = Clock::now();
  const ReducerConfig cfg = config.resolved(x.cols());
  ProjectionMatrix omega;
  {
    Phase phase(timings, &ReducerTimings::sketch);
    omega = regenerate(cfg.projection);
  }
  ReductionMap map;
  map.method = to_string(ReducerMethod::rp);
  map.k = cfg.k;
  map.l = cfg.l;
  map.n = cfg.projection.n;
  map.seed = cfg.projection.seed;
  map.density = cfg.projection.density;
  map.scale = omega.scale;
  map.v = omega.scaled_dense();
  if (timings) timings->total += seconds_since(t0);
  return map;
}

ReductionMap reduce_spca(const SparseMatrix& x, const ReducerConfig& config, ReducerTimings* timings) {
  const auto t0 = Clock::now();
  const ReducerConfig cfg = config.resolved(x.cols());
  ProjectionMatrix omega = regenerate(cfg.projection);
  SketchMatrix sketch;
  {
    Phase phase(timings, &ReducerTimings::sketch);
    sketch = build_sketch(x, omega);
  }
  QRFactors qr;
  {
    Phase phase(timings, &ReducerTimings::qr);
    qr = householder_qr(sketch.u);
  }
  DenseMatrix f;
  {
    Phase phase(timings, &ReducerTimings::f_form);
    f = gemm_t(qr.q, x);
  }
  ReductionMap map = finish_spectral(cfg, omega, std::move(f), timings);
  if (timings) timings->total += seconds_since(t0);
  return map;
}

ReductionMap reduce_lazy_spca(const SparseMatrix& x, const ReducerConfig& config,
                              ReducerTimings* timings) {
  const auto t0 = Clock::now();
  const ReducerConfig cfg = config.resolved(x.cols());
  ProjectionMatrix omega = regenerate(cfg.projection);
  SketchMatrix sketch;
  {
    Phase phase(timings, &ReducerTimings::sketch);
    sketch = build_sketch(x, omega);
  }
  DenseMatrix f;
  {
    Phase phase(timings, &ReducerTimings::f_form);
    f = gemm_t(sketch.u, x);
  }
  ReductionMap map = finish_spectral(cfg, omega, std::move(f), timings);
  if (timings) timings->total += seconds_since(t0);
  return map;
}

ReductionMap reduce_spca_streaming(RowBlockStream& blocks, const ReducerConfig& config,
                                   ReducerTimings* timings) {
  const auto t0 = Clock::now();
  StreamState st;
  ReducerConfig cfg;
  bool first = true;
  while (true) {
    std::optional<RowBlock> blk;
    if (first) {
      blk = blocks.next();
      if (!blk) throw InvalidArgumentError("streaming: the block stream is empty");
      cfg = config.resolved(blk->block.cols());
      st.omega = regenerate(cfg.projection);
      st.expected_slice = 0;
      // re-run the slice bookkeeping for the first block
      if (blk->slice_index != 0)
        throw InvalidArgumentError("streaming: first slice index must be 0, got " +
                                   std::to_string(blk->slice_index));
      st.expected_slice = 1;
      st.seen_rows = blk->block.rows();
    } else {
      blk = pull(blocks, st, cfg);
      if (!blk) break;
    }
    const index_t slice = blk->slice_index;
    try {
      DenseMatrix u_s;
      {
        Phase phase(timings, &ReducerTimings::sketch);
        u_s = sketch_block(blk->block, st.omega);
      }
      if (first) {
        if (u_s.rows() < cfg.l)
          throw DimensionError("streaming spca: first block has " + std::to_string(u_s.rows()) +
                               " rows; the orthonormal route needs at least l = " +
                               std::to_string(cfg.l));
        {
          Phase phase(timings, &ReducerTimings::f_form);
          st.f = gemm_t(u_s, blk->block);
        }
        Phase phase(timings, &ReducerTimings::qr);
        st.r = householder_qr_r_only(u_s);
        first = false;
      } else {
        {
          Phase phase(timings, &ReducerTimings::f_form);
          gemm_t_add(u_s, blk->block, st.f);
        }
        Phase phase(timings, &ReducerTimings::qr);
        st.r = householder_qr_r_only(vstack(st.r, u_s));
      }
    } catch (const RankDeficiencyError& e) {
      throw RankDeficiencyError("slice " + std::to_string(slice) + ": " + e.what(), slice);
    }
  }
  {
    Phase phase(timings, &ReducerTimings::qr);
    solve_rt_in_place(st.r, st.f);
  }
  ReductionMap map = finish_spectral(cfg, st.omega, std::move(st.f), timings);
  if (timings) timings->total += seconds_since(t0);
  return map;
}

ReductionMap reduce_lazy_spca_streaming(RowBlockStream& blocks, const ReducerConfig& config,
                                        ReducerTimings* timings) {
  const auto t0 = Clock::now();
  StreamState st;
  ReducerConfig cfg;
  auto blk = blocks.next();
  if (!blk) throw InvalidArgumentError("streaming: the block stream is empty");
  if (blk->slice_index != 0)
    throw InvalidArgumentError("streaming: first slice index must be 0, got " +
                               std::to_string(blk->slice_index));
  cfg = config.resolved(blk->block.cols());
  st.omega = regenerate(cfg.projection);
  st.expected_slice = 1;
  st.seen_rows = blk->block.rows();
  {
    DenseMatrix u_s;
    {
      Phase phase(timings, &ReducerTimings::sketch);
      u_s = sketch_block(blk->block, st.omega);
    }
    Phase phase(timings, &ReducerTimings::f_form);
    st.f = gemm_t(u_s, blk->block);
  }
  while ((blk = pull(blocks, st, cfg))) {
    DenseMatrix u_s;
    {
      Phase phase(timings, &ReducerTimings::sketch);
      u_s = sketch_block(blk->block, st.omega);
    }
    Phase phase(timings, &ReducerTimings::f_form);
    gemm_t_add(u_s, blk->block, st.f);
  }
  ReductionMap map = finish_spectral(cfg, st.omega, std::move(st.f), timings);
  if (timings) timings->total += seconds_since(t0);
  return map;
}

ReductionMap reduce(const SparseMatrix& x, const ReducerConfig& config, ReducerTimings* timings) {
  const ReducerConfig cfg = config.resolved(x.cols());
  if (cfg.method == ReducerMethod::rp) return reduce_rp(x, cfg, timings);
  if (!cfg.streaming)
    return cfg.method == ReducerMethod::spca ? reduce_spca(x, cfg, timings)
                                             : reduce_lazy_spca(x, cfg, timings);
  SliceRowBlockStream stream(x, cfg.block_rows);
  return cfg.method == ReducerMethod::spca ? reduce_spca_streaming(stream, cfg, timings)
                                           : reduce_lazy_spca_streaming(stream, cfg, timings);
}

DenseMatrix apply_map(const ReductionMap& map, const SparseMatrix& x) {
  if (x.cols() != map.n)
    throw DimensionError("apply_map: data has " + std::to_string(x.cols()) +
                         " columns but the map expects " + std::to_string(map.n));
  return spmm(x, map.v);
}

void save_map(const ReductionMap& map, std::ostream& out) {
  nlohmann::ordered_json header;
  header["method"] = map.method;
  header["k"] = map.k;
  header["l"] = map.l;
  header["seed"] = map.seed;
  header["density"] = map.density;
  header["c"] = map.scale;
  header["n"] = map.n;
  if (!map.singular_values.empty()) header["singular_values"] = map.singular_values;
  out << header.dump() << '\n';
  write_dense_matrix_market(map.v, out);
}

void save_map_file(const ReductionMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  save_map(map, out);
}

ReductionMap load_map(std::istream& in) {
  std::string header_line;
  if (!std::getline(in, header_line)) throw ParseError("map file is empty", 1);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("map header: ") + e.what(), 1);
  }
  ReductionMap map;
  try {
    map.method = header.at("method").get<std::string>();
    map.k = header.at("k").get<index_t>();
    map.l = header.at("l").get<index_t>();
    map.seed = header.at("seed").get<std::uint64_t>();
    map.density = header.at("density").get<double>();
    map.scale = header.at("c").get<double>();
    map.n = header.at("n").get<index_t>();
    if (header.contains("singular_values"))
      map.singular_values = header.at("singular_values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("map header: ") + e.what(), 1);
  }
  map.v = read_dense_matrix_market(in);
  if (map.v.rows() != map.n || map.v.cols() != map.k)
    throw DimensionError("map payload is " + std::to_string(map.v.rows()) + "x" +
                         std::to_string(map.v.cols()) + " but the header says " +
                         std::to_string(map.n) + "x" + std::to_string(map.k));
  if (!map.singular_values.empty() && static_cast<index_t>(map.singular_values.size()) != map.k)
    throw DimensionError("map header: singular_values length does not match k");
  return map;
}

ReductionMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return load_map(in);
}

}  // namespace lazypca
