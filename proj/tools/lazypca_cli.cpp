// Command-line front end for the reduction library: fit maps (in-core or
// streaming), compare methods on shared data, time the reducers, and generate
// seeded synthetic inputs. Every run is reproducible from its flags or from a
// JSON manifest; explicit flags win over manifest entries.
//
// Exit codes: 0 success, 1 run failure (including a failed method-agreement
// check in `compare`), 2 parse or argument problems, 3 rank deficiency,
// 4 dimension mismatch.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lazypca/dense_matrix.hpp"
#include "lazypca/error.hpp"
#include "lazypca/matrix_io.hpp"
#include "lazypca/metrics.hpp"
#include "lazypca/projection.hpp"
#include "lazypca/qr.hpp"
#include "lazypca/reducer.hpp"
#include "lazypca/sparse_matrix.hpp"
#include "lazypca/synthetic.hpp"
#include "lazypca/threading.hpp"

namespace {

using lazypca::DenseMatrix;
using lazypca::index_t;
using lazypca::SparseMatrix;

// ---------------------------------------------------------------------------
// Manifest plumbing. A manifest is a flat JSON object whose keys mirror the
// command flags; anything missing falls back to the flag default, anything
// present is overridden by an explicitly passed flag.

nlohmann::json load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lazypca::ParseError("manifest: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw lazypca::ParseError(std::string("manifest: ") + e.what());
  }
  if (!j.is_object()) throw lazypca::ParseError("manifest: top level must be a JSON object");
  return j;
}

template <typename T>
void fill_from(const CLI::App& cmd, const std::string& flag, const nlohmann::json& j,
               const char* key, T& dst) {
  if (cmd.count(flag) > 0 || !j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw lazypca::ParseError("manifest: bad value for \"" + std::string(key) + "\": " + e.what());
  }
}

// Settings shared by reduce and compare runs.
struct FitSettings {
  std::string input;
  std::string format = "mm";
  std::string method = "spca";
  std::int64_t k = 0;
  std::int64_t l = 0;  // 0: same as k
  std::string projection = "gaussian";
  std::string density_policy = "conservative";
  std::uint64_t seed = 0;
  std::int64_t block_rows = 0;
  bool streaming = false;
  bool deterministic = false;
  std::string out_map;
  std::string out_reduced;
  std::string report = "json";
};

void check_format(const std::string& format) {
  if (format != "mm" && format != "csv")
    throw lazypca::InvalidArgumentError("format must be \"mm\" or \"csv\", got \"" + format + "\"");
}

SparseMatrix load_input(const std::string& path, const std::string& format) {
  check_format(format);
  if (format == "mm") return lazypca::read_sparse_matrix_market_file(path);
  return lazypca::sparsify(lazypca::read_dense_csv_file(path));
}

lazypca::ReducerConfig make_config(const FitSettings& s) {
  lazypca::ReducerConfig config;
  config.method = lazypca::reducer_method_from_string(s.method);
  config.k = s.k;
  config.l = s.l;
  config.block_rows = s.block_rows;
  config.streaming = s.streaming || s.block_rows > 0;
  config.deterministic = true;  // runs are deterministic in either mode
  config.projection.kind = lazypca::projection_kind_from_string(s.projection);
  config.projection.seed = s.seed;
  if (config.projection.kind == lazypca::ProjectionKind::very_sparse) {
    const index_t width = s.l > 0 ? s.l : s.k;
    config.projection.density =
        lazypca::density_for(lazypca::DensityPolicy::parse(s.density_policy), width);
  }
  return config;
}

std::string timings_json(const lazypca::ReducerTimings& t) {
  std::ostringstream out;
  out << "{\"sketch\":" << lazypca::format_double(t.sketch)
      << ",\"qr\":" << lazypca::format_double(t.qr)
      << ",\"f_form\":" << lazypca::format_double(t.f_form)
      << ",\"svd\":" << lazypca::format_double(t.svd)
      << ",\"total\":" << lazypca::format_double(t.total) << "}";
  return out.str();
}

// ---------------------------------------------------------------------------
// reduce

// Streams the input as row blocks. Matrix Market streams know their row count
// up front; CSV streams discover it as they go.
std::unique_ptr<lazypca::RowBlockStream> open_stream(const std::string& path,
                                                     const std::string& format,
                                                     index_t block_rows, index_t* cols_out) {
  check_format(format);
  if (format == "mm") {
    auto stream = std::make_unique<lazypca::MatrixMarketRowBlockStream>(path, block_rows);
    *cols_out = stream->cols();
    return stream;
  }
  auto stream = std::make_unique<lazypca::CsvRowBlockStream>(path, block_rows);
  *cols_out = stream->cols();
  return stream;
}

// Second pass over the input applying the fitted map block by block, so the
// reduced output never requires the full matrix in memory.
void write_reduced_streaming(const lazypca::ReductionMap& map, const std::string& input,
                             const std::string& format, index_t block_rows,
                             const std::string& out_path) {
  index_t cols = 0;
  auto stream = open_stream(input, format, block_rows, &cols);
  std::ofstream out(out_path);
  if (!out) throw lazypca::ParseError("cannot open output file " + out_path);
  while (auto block = stream->next()) {
    lazypca::write_dense_csv(lazypca::apply_map(map, block->block), out);
  }
  if (!out) throw lazypca::Error("write failed for " + out_path);
}

int run_reduce(const FitSettings& s) {
  if (s.input.empty()) throw lazypca::InvalidArgumentError("reduce: no input given");
  if (s.report != "json")
    throw lazypca::InvalidArgumentError("reduce: only the json report format exists");
  lazypca::ReducerConfig config = make_config(s);

  lazypca::ReducerTimings timings;
  lazypca::ReductionMap map;
  if (config.streaming) {
    index_t cols = 0;
    auto stream = open_stream(s.input, s.format, config.block_rows, &cols);
    const lazypca::ReducerConfig cfg = config.resolved(cols);
    switch (cfg.method) {
      case lazypca::ReducerMethod::spca:
        map = lazypca::reduce_spca_streaming(*stream, cfg, &timings);
        break;
      case lazypca::ReducerMethod::lazy_spca:
        map = lazypca::reduce_lazy_spca_streaming(*stream, cfg, &timings);
        break;
      case lazypca::ReducerMethod::rp:
        // The map is the scaled projection itself; no pass over the data is
        // needed to fit it, only the column count.
        map = lazypca::reduce_rp(SparseMatrix::identity(cols), cfg, &timings);
        break;
    }
    if (!s.out_reduced.empty())
      write_reduced_streaming(map, s.input, s.format, config.block_rows, s.out_reduced);
  } else {
    const SparseMatrix x = load_input(s.input, s.format);
    map = lazypca::reduce(x, config, &timings);
    if (!s.out_reduced.empty())
      lazypca::write_dense_csv_file(lazypca::apply_map(map, x), s.out_reduced);
  }

  if (!s.out_map.empty()) lazypca::save_map_file(map, s.out_map);
  std::cout << timings_json(timings) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareSettings {
  FitSettings base;  // input/format/k/l/projection/density policy/seed
  std::string input_a, input_b;
  std::string method_a = "spca", method_b = "lazy_spca";
  std::int64_t max_pairs = 10000;
  std::string out_report;
};

// Orthonormal basis of the map's column span, for subspace distances. The
// spectral methods already deliver orthonormal columns; a plain random
// projection has to be orthonormalized first.
DenseMatrix subspace_basis(const lazypca::ReductionMap& map) {
  if (map.method == "rp") return lazypca::householder_qr(map.v).q;
  return map.v;
}

lazypca::ReconstructionErrorReport method_error(const SparseMatrix& x,
                                                const lazypca::ReductionMap& map,
                                                const lazypca::ReducerConfig& cfg) {
  // The reference SVD behind the bound runs on the densified matrix; keep it
  // to genuinely small inputs.
  const index_t densify_limit = 300;
  const bool with_bound = cfg.l >= cfg.k + 2 && std::max(x.rows(), x.cols()) <= densify_limit;
  if (map.method == "rp")
    return lazypca::row_space_reconstruction_error(x, subspace_basis(map));
  const lazypca::ProjectionMatrix omega = lazypca::regenerate(cfg.projection);
  const lazypca::SketchMatrix sketch = lazypca::build_sketch(x, omega);
  const auto route = map.method == "spca" ? lazypca::ResidualRoute::qr : lazypca::ResidualRoute::lazy;
  return lazypca::reconstruction_error(x, sketch.u, route, cfg.k, cfg.l, with_bound, densify_limit);
}

int run_compare(const CompareSettings& s) {
  const std::string input_a = s.input_a.empty() ? s.base.input : s.input_a;
  const std::string input_b = s.input_b.empty() ? s.base.input : s.input_b;
  if (input_a.empty() || input_b.empty())
    throw lazypca::InvalidArgumentError("compare: no input given");

  const SparseMatrix xa = load_input(input_a, s.base.format);
  const SparseMatrix xb = input_b == input_a ? xa : load_input(input_b, s.base.format);
  if (xa.rows() != xb.rows() || xa.cols() != xb.cols())
    throw lazypca::DimensionError("compare: inputs are " + std::to_string(xa.rows()) + "x" +
                                  std::to_string(xa.cols()) + " and " + std::to_string(xb.rows()) +
                                  "x" + std::to_string(xb.cols()) + "; dimensions must match");

  FitSettings fit_a = s.base;
  fit_a.method = s.method_a;
  FitSettings fit_b = s.base;
  fit_b.method = s.method_b;
  const lazypca::ReducerConfig cfg_a = make_config(fit_a).resolved(xa.cols());
  const lazypca::ReducerConfig cfg_b = make_config(fit_b).resolved(xb.cols());

  const lazypca::ReductionMap map_a = lazypca::reduce(xa, cfg_a);
  const lazypca::ReductionMap map_b = lazypca::reduce(xb, cfg_b);

  lazypca::ComparisonReport report;
  report.method_a = map_a.method;
  report.method_b = map_b.method;
  report.k = cfg_a.k;
  report.l = cfg_a.l;
  report.seed = s.base.seed;
  report.chordal = lazypca::chordal_distance(subspace_basis(map_a), subspace_basis(map_b));

  const auto err_a = method_error(xa, map_a, cfg_a);
  const auto err_b = method_error(xb, map_b, cfg_b);
  report.spectral_error = err_a.spectral_error;
  report.frobenius_error = err_a.frobenius_error;
  report.spectral_error_b = err_b.spectral_error;
  report.frobenius_error_b = err_b.frobenius_error;
  report.bound = err_a.bound;

  // Pairwise distances through both maps over the same rows (Proposition 3's
  // statement); xa is the sampling source, which the dimension check above
  // makes representative for both.
  const auto distances =
      lazypca::distance_preservation(xa, map_a, &map_b, s.max_pairs, s.base.seed);
  report.max_contraction_violation = distances.max_contraction_violation;
  report.max_map_discrepancy = distances.max_map_discrepancy;

  const std::string line = lazypca::comparison_record_json(report);
  std::cout << line << "\n";
  if (!s.out_report.empty()) {
    std::ofstream out(s.out_report, std::ios::app);
    if (!out) throw lazypca::ParseError("cannot open output file " + s.out_report);
    out << line << "\n";
  }

  // For the orthonormal pair the propositions pin the two runs together: the
  // sketch projector (and hence its residual) is identical for any sketch
  // width, both maps contract distances, and at k = l the subspaces and the
  // reduced distances coincide too. Truncating below the sketch width is
  // exactly where the cheap route trades accuracy away, so those two checks
  // only apply without truncation. Other pairs are informational only.
  const bool prop_pair = (report.method_a == "spca" && report.method_b == "lazy_spca") ||
                         (report.method_a == "lazy_spca" && report.method_b == "spca");
  if (!prop_pair) return 0;
  const double err_scale =
      1.0 + std::max(std::max(err_a.spectral_error, err_b.spectral_error),
                     std::max(err_a.frobenius_error, err_b.frobenius_error));
  bool ok = report.max_contraction_violation <= 1e-12 &&
            std::abs(err_a.spectral_error - err_b.spectral_error) <= 1e-9 * err_scale &&
            std::abs(err_a.frobenius_error - err_b.frobenius_error) <= 1e-9 * err_scale;
  if (cfg_a.k == cfg_a.l)
    ok = ok && report.chordal <= 1e-8 && report.max_map_discrepancy <= 1e-9;
  if (!ok) std::cerr << "compare: spca/lazy_spca agreement tolerances violated\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bench

struct BenchSettings {
  std::string input;
  std::string format = "mm";
  std::int64_t m = 0, n = 0;
  double density = 0.01;
  std::uint64_t seed = 0;
  std::string k_list;
  std::int64_t repeats = 1;
  std::string methods = "spca,lazy_spca";
  std::int64_t block_rows = 25000;
  std::string projection = "very_sparse";
  std::string density_policy = "aggressive";
  std::string out;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::int64_t sparse_bytes(index_t nnz, index_t cols) {
  return nnz * 16 + (cols + 1) * 8;  // CSC: values + row indices + column pointers
}

// Rough additional-workspace model for each method, mirroring what the
// reducers actually allocate. An estimate, not an accounting.
std::int64_t peak_bytes(const lazypca::ReducerConfig& cfg, index_t m, index_t n, index_t nnz) {
  const index_t l = cfg.l;
  std::int64_t bytes = sparse_bytes(nnz, n);  // the input (or the generator's output)
  if (cfg.projection.kind == lazypca::ProjectionKind::gaussian) {
    bytes += n * l * 8;
  } else {
    const auto omega_nnz = static_cast<index_t>(cfg.projection.density * static_cast<double>(n * l));
    bytes += sparse_bytes(omega_nnz, l);
  }
  const index_t rows_held = cfg.streaming ? std::min(cfg.block_rows, m) : m;
  if (cfg.streaming && m > 0)
    bytes += sparse_bytes(nnz * rows_held / m + 1, n);  // one resident block slice
  switch (cfg.method) {
    case lazypca::ReducerMethod::rp:
      bytes += n * cfg.k * 8;  // the returned map
      break;
    case lazypca::ReducerMethod::spca:
      bytes += rows_held * l * 8;  // block sketch (doubles as Q in-core)
      bytes += cfg.streaming ? (rows_held + l) * l * 8 : rows_held * l * 8;  // stack / Q
      bytes += l * n * 8 + l * l * 8;  // F and R
      break;
    case lazypca::ReducerMethod::lazy_spca:
      bytes += rows_held * l * 8 + l * n * 8 + l * l * 8;  // block sketch, F, Gram
      break;
  }
  return bytes;
}

int run_bench(const BenchSettings& s) {
  const std::vector<std::string> k_items = split_commas(s.k_list);
  if (k_items.empty()) return 0;  // nothing requested, nothing to do
  std::vector<index_t> ks;
  for (const auto& item : k_items) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || value < 1)
      throw lazypca::InvalidArgumentError("bench: bad k \"" + item + "\" in --k-list");
    ks.push_back(value);
  }
  const std::vector<std::string> methods = split_commas(s.methods);
  if (methods.empty()) throw lazypca::InvalidArgumentError("bench: no methods given");
  if (s.repeats < 1) throw lazypca::InvalidArgumentError("bench: repeats must be at least 1");

  SparseMatrix x;
  if (!s.input.empty()) {
    x = load_input(s.input, s.format);
  } else {
    if (s.m < 1 || s.n < 1)
      throw lazypca::InvalidArgumentError("bench: give --input or both --m and --n");
    lazypca::SyntheticSpec spec;
    spec.m = s.m;
    spec.n = s.n;
    spec.density = s.density;
    spec.spectrum = lazypca::SyntheticSpec::Spectrum::flat;
    spec.seed = s.seed;
    x = lazypca::gen_synthetic(spec);
  }

  std::ostringstream csv;
  csv << "method,k,l,phase,seconds,peak_resident_estimate\n";
  for (const index_t k : ks) {
    for (const auto& method : methods) {
      FitSettings fit;
      fit.method = method;
      fit.k = k;
      fit.projection = s.projection;
      fit.density_policy = s.density_policy;
      fit.seed = s.seed;
      fit.block_rows = s.block_rows;
      const lazypca::ReducerConfig cfg = make_config(fit).resolved(x.cols());

      lazypca::ReducerTimings mean;
      for (std::int64_t r = 0; r < s.repeats; ++r) {
        lazypca::ReducerTimings t;
        lazypca::reduce(x, cfg, &t);
        mean.sketch += t.sketch / static_cast<double>(s.repeats);
        mean.qr += t.qr / static_cast<double>(s.repeats);
        mean.f_form += t.f_form / static_cast<double>(s.repeats);
        mean.svd += t.svd / static_cast<double>(s.repeats);
        mean.total += t.total / static_cast<double>(s.repeats);
      }
      const std::int64_t peak = peak_bytes(cfg, x.rows(), x.cols(), x.nnz());
      const std::pair<const char*, double> rows[] = {{"sketch", mean.sketch},
                                                     {"qr", mean.qr},
                                                     {"f_form", mean.f_form},
                                                     {"svd", mean.svd},
                                                     {"total", mean.total}};
      for (const auto& [phase, seconds] : rows) {
        csv << method << ',' << k << ',' << cfg.l << ',' << phase << ','
            << lazypca::format_double(seconds) << ',' << peak << "\n";
      }
    }
  }

  if (s.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(s.out);
    if (!out) throw lazypca::ParseError("cannot open output file " + s.out);
    out << csv.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gen-synthetic

struct GenSettings {
  std::int64_t m = 0, n = 0;
  double density = 0.0;
  std::string spectrum = "flat";
  double decay_rate = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenSettings& s) {
  lazypca::SyntheticSpec spec;
  spec.m = s.m;
  spec.n = s.n;
  spec.density = s.density;
  if (s.spectrum == "flat") {
    spec.spectrum = lazypca::SyntheticSpec::Spectrum::flat;
  } else if (s.spectrum == "decay") {
    spec.spectrum = lazypca::SyntheticSpec::Spectrum::decay;
  } else {
    throw lazypca::InvalidArgumentError("gen-synthetic: spectrum must be \"flat\" or \"decay\"");
  }
  spec.decay_rate = s.decay_rate;
  spec.seed = s.seed;
  const SparseMatrix x = lazypca::gen_synthetic(spec);
  lazypca::write_sparse_matrix_market_file(x, s.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse dimensionality reduction: random projection, sketch-based PCA, "
               "and its premature-truncation variant"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: hardware concurrency)");

  FitSettings reduce_settings;
  std::string reduce_manifest;
  CLI::App* reduce_cmd = app.add_subcommand("reduce", "fit a reduction map and apply it");
  reduce_cmd->add_option("--input", reduce_settings.input, "input matrix file");
  reduce_cmd->add_option("--format", reduce_settings.format, "input format: mm or csv");
  reduce_cmd->add_option("--method", reduce_settings.method, "rp, spca, or lazy_spca");
  reduce_cmd->add_option("--k", reduce_settings.k, "output dimensionality");
  reduce_cmd->add_option("--l", reduce_settings.l, "sketch width (default: k)");
  reduce_cmd->add_option("--projection", reduce_settings.projection, "gaussian or very_sparse");
  reduce_cmd->add_option("--density-policy", reduce_settings.density_policy,
                         "aggressive, conservative, or value:<f>");
  reduce_cmd->add_option("--seed", reduce_settings.seed, "projection seed");
  reduce_cmd->add_option("--block-rows", reduce_settings.block_rows,
                         "rows per streamed block (implies streaming)");
  reduce_cmd->add_flag("--streaming", reduce_settings.streaming,
                       "stream the input in row blocks (needs --block-rows)");
  reduce_cmd->add_flag("--deterministic", reduce_settings.deterministic,
                       "force deterministic accumulation (always on)");
  reduce_cmd->add_option("--out-map", reduce_settings.out_map, "where to write the fitted map");
  reduce_cmd->add_option("--out-reduced", reduce_settings.out_reduced,
                         "where to write the reduced rows (CSV)");
  reduce_cmd->add_option("--report", reduce_settings.report, "report format (json)");
  reduce_cmd->add_option("--manifest", reduce_manifest, "JSON manifest with defaults for the above");

  CompareSettings compare_settings;
  std::string compare_manifest;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run two methods on the same data and report agreement");
  compare_cmd->add_option("--input", compare_settings.base.input, "input for both methods");
  compare_cmd->add_option("--input-a", compare_settings.input_a, "input for method A");
  compare_cmd->add_option("--input-b", compare_settings.input_b, "input for method B");
  compare_cmd->add_option("--format", compare_settings.base.format, "input format: mm or csv");
  compare_cmd->add_option("--method-a", compare_settings.method_a, "first method");
  compare_cmd->add_option("--method-b", compare_settings.method_b, "second method");
  compare_cmd->add_option("--k", compare_settings.base.k, "output dimensionality");
  compare_cmd->add_option("--l", compare_settings.base.l, "sketch width (default: k)");
  compare_cmd->add_option("--projection", compare_settings.base.projection,
                          "gaussian or very_sparse");
  compare_cmd->add_option("--density-policy", compare_settings.base.density_policy,
                          "aggressive, conservative, or value:<f>");
  compare_cmd->add_option("--seed", compare_settings.base.seed, "shared projection seed");
  compare_cmd->add_option("--max-pairs", compare_settings.max_pairs,
                          "row pairs sampled for distance checks");
  compare_cmd->add_option("--out-report", compare_settings.out_report,
                          "append the JSON record to this file");
  compare_cmd->add_option("--manifest", compare_manifest,
                          "JSON manifest with defaults for the above");

  BenchSettings bench_settings;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time the reducers over a list of target dims");
  bench_cmd->add_option("--input", bench_settings.input, "input matrix file (else synthetic)");
  bench_cmd->add_option("--format", bench_settings.format, "input format: mm or csv");
  bench_cmd->add_option("--m", bench_settings.m, "synthetic rows");
  bench_cmd->add_option("--n", bench_settings.n, "synthetic columns");
  bench_cmd->add_option("--density", bench_settings.density, "synthetic nonzero fraction");
  bench_cmd->add_option("--seed", bench_settings.seed, "synthetic + projection seed");
  bench_cmd->add_option("--k-list", bench_settings.k_list,
                        "comma-separated target dims (empty: nothing to run)");
  bench_cmd->add_option("--repeats", bench_settings.repeats, "timing repeats per configuration");
  bench_cmd->add_option("--methods", bench_settings.methods, "comma-separated methods to time");
  bench_cmd->add_option("--block-rows", bench_settings.block_rows,
                        "rows per streamed block (0: in-core)");
  bench_cmd->add_option("--projection", bench_settings.projection, "gaussian or very_sparse");
  bench_cmd->add_option("--density-policy", bench_settings.density_policy,
                        "aggressive, conservative, or value:<f>");
  bench_cmd->add_option("--out", bench_settings.out, "CSV output path (default: stdout)");

  GenSettings gen_settings;
  CLI::App* gen_cmd = app.add_subcommand("gen-synthetic", "write a seeded sparse test matrix");
  gen_cmd->add_option("--m", gen_settings.m, "rows")->required();
  gen_cmd->add_option("--n", gen_settings.n, "columns")->required();
  gen_cmd->add_option("--density", gen_settings.density, "nonzero fraction in (0, 1]")->required();
  gen_cmd->add_option("--spectrum", gen_settings.spectrum, "flat or decay");
  gen_cmd->add_option("--decay-rate", gen_settings.decay_rate, "per-term factor for decay");
  gen_cmd->add_option("--seed", gen_settings.seed, "generator seed");
  gen_cmd->add_option("--out", gen_settings.out, "Matrix Market output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean; bad flags are a parse problem
  }

  try {
    lazypca::set_thread_count(threads);
    if (*reduce_cmd) {
      if (!reduce_manifest.empty()) {
        const nlohmann::json j = load_manifest(reduce_manifest);
        FitSettings& s = reduce_settings;
        fill_from(*reduce_cmd, "--input", j, "input", s.input);
        fill_from(*reduce_cmd, "--format", j, "format", s.format);
        fill_from(*reduce_cmd, "--method", j, "method", s.method);
        fill_from(*reduce_cmd, "--k", j, "k", s.k);
        fill_from(*reduce_cmd, "--l", j, "l", s.l);
        fill_from(*reduce_cmd, "--projection", j, "projection", s.projection);
        fill_from(*reduce_cmd, "--density-policy", j, "density_policy", s.density_policy);
        fill_from(*reduce_cmd, "--seed", j, "seed", s.seed);
        fill_from(*reduce_cmd, "--block-rows", j, "block_rows", s.block_rows);
        fill_from(*reduce_cmd, "--streaming", j, "streaming", s.streaming);
        fill_from(*reduce_cmd, "--deterministic", j, "deterministic", s.deterministic);
        fill_from(*reduce_cmd, "--out-map", j, "out_map", s.out_map);
        fill_from(*reduce_cmd, "--out-reduced", j, "out_reduced", s.out_reduced);
      }
      return run_reduce(reduce_settings);
    }
    if (*compare_cmd) {
      if (!compare_manifest.empty()) {
        const nlohmann::json j = load_manifest(compare_manifest);
        FitSettings& s = compare_settings.base;
        fill_from(*compare_cmd, "--input", j, "input", s.input);
        fill_from(*compare_cmd, "--format", j, "format", s.format);
        fill_from(*compare_cmd, "--k", j, "k", s.k);
        fill_from(*compare_cmd, "--l", j, "l", s.l);
        fill_from(*compare_cmd, "--projection", j, "projection", s.projection);
        fill_from(*compare_cmd, "--density-policy", j, "density_policy", s.density_policy);
        fill_from(*compare_cmd, "--seed", j, "seed", s.seed);
        fill_from(*compare_cmd, "--method-a", j, "method_a", compare_settings.method_a);
        fill_from(*compare_cmd, "--method-b", j, "method_b", compare_settings.method_b);
      }
      return run_compare(compare_settings);
    }
    if (*bench_cmd) return run_bench(bench_settings);
    if (*gen_cmd) return run_gen(gen_settings);
  } catch (const lazypca::ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return 2;
  } catch (const lazypca::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lazypca::RankDeficiencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lazypca::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
