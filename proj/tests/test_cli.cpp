// End-to-end tests of the command-line tool. Each case shells out to the
// built binary (path baked in at configure time, overridable through the
// LAZYPCA_CLI environment variable) and inspects exit codes, files, and the
// JSON/CSV it prints.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "lazypca/dense_matrix.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/matrix_io.hpp"
#include "lazypca/reducer.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace {

using lazypca::DenseMatrix;
using lazypca::index_t;
using lazypca::SparseMatrix;

std::string cli_path() {
  if (const char* env = std::getenv("LAZYPCA_CLI")) return env;
#ifdef LAZYPCA_CLI_PATH
  return LAZYPCA_CLI_PATH;
#else
  return "";
#endif
}

// Scratch file that cleans up after itself.
class TempFile {
 public:
  explicit TempFile(const std::string& name) {
    static int counter = 0;
    path_ = "cli_test_" + std::to_string(++counter) + "_" + name;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

RunResult run_cli(const std::string& args) {
  const std::string exe = cli_path();
  REQUIRE_MESSAGE(!exe.empty(), "no CLI path; set LAZYPCA_CLI");
  TempFile out("stdout.txt");
  TempFile err("stderr.txt");
  const std::string command = exe + " " + args + " >" + out.path() + " 2>" + err.path();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = status != -1 && WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out.path());
  result.err = slurp(err.path());
  return result;
}

// Pulls the number following "key": out of a single-line JSON report.
double json_number(const std::string& line, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = line.find(needle);
  REQUIRE_MESSAGE(pos != std::string::npos, "missing key " << key << " in " << line);
  return std::strtod(line.c_str() + pos + needle.size(), nullptr);
}

DenseMatrix random_dense(std::mt19937_64& rng, index_t rows, index_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix out(rows, cols);
  for (index_t j = 0; j < cols; ++j)
    for (index_t i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

// A small matrix of exactly the requested rank, written as Matrix Market.
void write_low_rank(const std::string& path, index_t m, index_t n, index_t rank,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const DenseMatrix a = random_dense(rng, m, rank);
  const DenseMatrix b = random_dense(rng, rank, n);
  lazypca::write_sparse_matrix_market_file(lazypca::sparsify(lazypca::dense_gemm(a, b)), path);
}

double row_distance(const DenseMatrix& x, index_t i, index_t j) {
  double sum = 0.0;
  for (index_t c = 0; c < x.cols(); ++c) {
    const double d = x(i, c) - x(j, c);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("help exits cleanly and a missing subcommand does not") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("reduce --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--no-such-flag").exit_code == 2);
}

TEST_CASE("gen-synthetic writes the requested matrix and validates parameters") {
  TempFile out("gen.mm");
  CHECK(run_cli("gen-synthetic --m 4 --n 4 --density 1 --out " + out.path()).exit_code == 0);
  const SparseMatrix x = lazypca::read_sparse_matrix_market_file(out.path());
  CHECK(x.rows() == 4);
  CHECK(x.cols() == 4);
  CHECK(x.nnz() == 16);  // density one fills every cell

  CHECK(run_cli("gen-synthetic --m 4 --n 4 --density 0 --out " + out.path()).exit_code == 2);
  CHECK(run_cli("gen-synthetic --m 4 --n 4 --out " + out.path()).exit_code == 2);  // missing flag
}

TEST_CASE("reduce writes a map, reduced rows, and a phase timing report") {
  TempFile data("data.mm");
  TempFile map("fit.map");
  TempFile reduced("fit.csv");
  REQUIRE(run_cli("gen-synthetic --m 25 --n 12 --density 0.5 --seed 2 --out " + data.path())
              .exit_code == 0);
  const RunResult r = run_cli("reduce --input " + data.path() +
                              " --method spca --k 3 --l 5 --seed 9 --out-map " + map.path() +
                              " --out-reduced " + reduced.path());
  CHECK(r.exit_code == 0);
  for (const char* phase : {"\"sketch\":", "\"qr\":", "\"f_form\":", "\"svd\":", "\"total\":"})
    CHECK(r.out.find(phase) != std::string::npos);
  CHECK(json_number(r.out, "total") >= 0.0);

  const lazypca::ReductionMap fitted = lazypca::load_map_file(map.path());
  CHECK(fitted.method == "spca");
  CHECK(fitted.k == 3);
  CHECK(fitted.l == 5);
  CHECK(fitted.n == 12);
  CHECK(fitted.seed == 9);

  const DenseMatrix y = lazypca::read_dense_csv_file(reduced.path());
  CHECK(y.rows() == 25);
  CHECK(y.cols() == 3);
}

TEST_CASE("exact-cover lazy reduction preserves row distances through the CLI") {
  TempFile data("rank3.mm");
  TempFile reduced("rank3.csv");
  write_low_rank(data.path(), 10, 6, 3, 77);
  const RunResult r = run_cli("reduce --input " + data.path() +
                              " --method lazy_spca --k 3 --seed 4 --out-reduced " + reduced.path());
  REQUIRE(r.exit_code == 0);

  const DenseMatrix original = lazypca::read_sparse_matrix_market_file(data.path()).to_dense();
  const DenseMatrix y = lazypca::read_dense_csv_file(reduced.path());
  REQUIRE(y.rows() == 10);
  REQUIRE(y.cols() == 3);
  // Rank 3 with k = l = 3 means the map covers the whole row space, so every
  // pairwise distance survives the reduction.
  for (index_t i = 0; i < 10; ++i)
    for (index_t j = i + 1; j < 10; ++j)
      CHECK(std::abs(row_distance(original, i, j) - row_distance(y, i, j)) <= 1e-9);
}

TEST_CASE("rp with k = l = n emits the scaled sketch") {
  TempFile data("rp.mm");
  TempFile map("rp.map");
  TempFile reduced("rp.csv");
  REQUIRE(run_cli("gen-synthetic --m 10 --n 6 --density 0.8 --seed 3 --out " + data.path())
              .exit_code == 0);
  REQUIRE(run_cli("reduce --input " + data.path() + " --method rp --k 6 --seed 8 --out-map " +
                  map.path() + " --out-reduced " + reduced.path())
              .exit_code == 0);

  const SparseMatrix x = lazypca::read_sparse_matrix_market_file(data.path());
  const lazypca::ReductionMap fitted = lazypca::load_map_file(map.path());
  const DenseMatrix expected = lazypca::apply_map(fitted, x);  // X Omega / c
  const DenseMatrix y = lazypca::read_dense_csv_file(reduced.path());
  REQUIRE(y.rows() == 10);
  REQUIRE(y.cols() == 6);
  double max_diff = 0.0;
  for (index_t j = 0; j < 6; ++j)
    for (index_t i = 0; i < 10; ++i)
      max_diff = std::max(max_diff, std::abs(y(i, j) - expected(i, j)));
  CHECK(max_diff == 0.0);  // the text round-trip is exact
}

TEST_CASE("identical runs produce byte-identical maps across threads and streaming") {
  TempFile data("det.mm");
  REQUIRE(run_cli("gen-synthetic --m 40 --n 16 --density 0.4 --seed 6 --out " + data.path())
              .exit_code == 0);
  const std::string fit = "reduce --input " + data.path() + " --method spca --k 4 --l 8 --seed 1";

  TempFile a("a.map"), b("b.map"), c("c.map"), d("d.map");
  REQUIRE(run_cli(fit + " --out-map " + a.path()).exit_code == 0);
  REQUIRE(run_cli(fit + " --out-map " + b.path()).exit_code == 0);
  CHECK(slurp(a.path()) == slurp(b.path()));

  REQUIRE(run_cli("--threads 1 " + fit + " --block-rows 12 --out-map " + c.path()).exit_code == 0);
  REQUIRE(run_cli("--threads 8 " + fit + " --block-rows 12 --out-map " + d.path()).exit_code == 0);
  CHECK(slurp(c.path()) == slurp(d.path()));
}

TEST_CASE("csv input goes through the same pipeline as matrix market") {
  TempFile mm("in.mm");
  TempFile csv("in.csv");
  TempFile from_mm("mm.map"), from_csv("csv.map"), streamed("stream.map");
  REQUIRE(run_cli("gen-synthetic --m 30 --n 10 --density 0.5 --seed 12 --out " + mm.path())
              .exit_code == 0);
  lazypca::write_dense_csv_file(lazypca::read_sparse_matrix_market_file(mm.path()).to_dense(),
                                csv.path());

  const std::string tail = " --method lazy_spca --k 4 --seed 2 --out-map ";
  REQUIRE(run_cli("reduce --input " + mm.path() + tail + from_mm.path()).exit_code == 0);
  REQUIRE(run_cli("reduce --input " + csv.path() + " --format csv" + tail + from_csv.path())
              .exit_code == 0);
  REQUIRE(run_cli("reduce --input " + csv.path() + " --format csv --block-rows 7" + tail +
                  streamed.path())
              .exit_code == 0);
  CHECK(slurp(from_mm.path()) == slurp(from_csv.path()));
  CHECK(slurp(from_mm.path()) == slurp(streamed.path()));  // single-seed, same F either way
}

TEST_CASE("manifest supplies defaults and explicit flags override it") {
  TempFile data("man.mm");
  TempFile manifest("man.json");
  TempFile from_flags("flags.map"), from_manifest("manifest.map"), overridden("override.map");
  REQUIRE(run_cli("gen-synthetic --m 20 --n 9 --density 0.6 --seed 5 --out " + data.path())
              .exit_code == 0);
  {
    std::ofstream out(manifest.path());
    out << "{\"input\":\"" << data.path()
        << "\",\"method\":\"spca\",\"k\":3,\"l\":5,\"seed\":11,\"out_map\":\""
        << from_manifest.path() << "\"}\n";
  }
  REQUIRE(run_cli("reduce --input " + data.path() + " --method spca --k 3 --l 5 --seed 11" +
                  " --out-map " + from_flags.path())
              .exit_code == 0);
  REQUIRE(run_cli("reduce --manifest " + manifest.path()).exit_code == 0);
  CHECK(slurp(from_flags.path()) == slurp(from_manifest.path()));

  REQUIRE(run_cli("reduce --manifest " + manifest.path() + " --seed 12 --out-map " +
                  overridden.path())
              .exit_code == 0);
  CHECK(lazypca::load_map_file(overridden.path()).seed == 12);
  CHECK(slurp(overridden.path()) != slurp(from_manifest.path()));

  TempFile junk("junk.json");
  {
    std::ofstream out(junk.path());
    out << "not json\n";
  }
  CHECK(run_cli("reduce --manifest " + junk.path()).exit_code == 2);
}

TEST_CASE("compare accepts the orthonormal pair and reports the agreement gaps") {
  TempFile data("cmp.mm");
  REQUIRE(run_cli("gen-synthetic --m 50 --n 20 --density 0.3 --seed 21 --out " + data.path())
              .exit_code == 0);
  // Subspace equality needs k = l: truncating below the sketch width is the
  // accuracy the premature-truncation route gives up.
  const RunResult r = run_cli("compare --input " + data.path() +
                              " --method-a spca --method-b lazy_spca --k 5 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"method_a\":\"spca\"") != std::string::npos);
  CHECK(r.out.find("\"method_b\":\"lazy_spca\"") != std::string::npos);
  CHECK(json_number(r.out, "chordal") <= 1e-8);
  CHECK(json_number(r.out, "max_map_discrepancy") <= 1e-9);
  CHECK(json_number(r.out, "max_contraction_violation") <= 1e-12);

  // With oversampling the sketch projector still matches between the two
  // routes (spectral/frobenius errors agree), which keeps the exit clean even
  // though the truncated subspaces drift apart.
  const RunResult wide = run_cli("compare --input " + data.path() +
                                 " --method-a spca --method-b lazy_spca --k 5 --l 8 --seed 7");
  CHECK(wide.exit_code == 0);
  const double err_a = json_number(wide.out, "spectral_error");
  const double err_b = json_number(wide.out, "spectral_error_b");
  CHECK(std::abs(err_a - err_b) <= 1e-9 * (1.0 + std::max(err_a, err_b)));
}

TEST_CASE("compare ranks plain random projection behind the spectral pair") {
  TempFile data("order.mm");
  REQUIRE(run_cli("gen-synthetic --m 120 --n 80 --density 0.3 --spectrum decay --decay-rate 0.7" +
                  std::string(" --seed 13 --out ") + data.path())
              .exit_code == 0);
  const std::string shared = " --k 5 --seed 17 --input " + data.path();
  const RunResult spectral =
      run_cli("compare --method-a spca --method-b lazy_spca" + shared);
  const RunResult rp = run_cli("compare --method-a rp --method-b spca" + shared);
  REQUIRE(spectral.exit_code == 0);
  REQUIRE(rp.exit_code == 0);  // informational pair: no tolerance gate
  // The random projection's subspace sits far from the spectral pair's shared
  // one; only the ordering is asserted, not a magnitude.
  CHECK(json_number(rp.out, "chordal") > json_number(spectral.out, "chordal"));
}

TEST_CASE("compare with mismatched input shapes exits with the dimension code") {
  TempFile a("dim_a.mm"), b("dim_b.mm");
  REQUIRE(run_cli("gen-synthetic --m 10 --n 8 --density 0.5 --out " + a.path()).exit_code == 0);
  REQUIRE(run_cli("gen-synthetic --m 12 --n 6 --density 0.5 --out " + b.path()).exit_code == 0);
  const RunResult r = run_cli("compare --input-a " + a.path() + " --input-b " + b.path() + " --k 2");
  CHECK(r.exit_code == 4);
}

TEST_CASE("malformed input and rank deficiency map to their exit codes") {
  TempFile junk("junk.mm");
  {
    std::ofstream out(junk.path());
    out << "garbage\n";
  }
  const RunResult parse = run_cli("reduce --input " + junk.path() + " --method spca --k 2");
  CHECK(parse.exit_code == 2);
  CHECK(parse.err.find("line 1") != std::string::npos);

  TempFile thin("rank1.mm");
  write_low_rank(thin.path(), 10, 6, 1, 31);
  CHECK(run_cli("reduce --input " + thin.path() + " --method lazy_spca --k 3").exit_code == 3);

  CHECK(run_cli("reduce --input no_such_file.mm --method spca --k 2").exit_code == 2);
}

TEST_CASE("bench emits sum-consistent phase rows and treats an empty list as a no-op") {
  const RunResult empty = run_cli("bench --m 100 --n 40 --density 0.1 --k-list \"\"");
  CHECK(empty.exit_code == 0);
  CHECK(empty.out.empty());

  const RunResult r =
      run_cli("bench --m 300 --n 60 --density 0.1 --k-list 4,8 --repeats 2 --block-rows 100");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "method,k,l,phase,seconds,peak_resident_estimate");

  struct Group {
    double phases = 0.0, total = 0.0;
    int rows = 0;
  };
  std::vector<std::pair<std::string, Group>> groups;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string method, k, l, phase, seconds, peak;
    REQUIRE(std::getline(fields, method, ','));
    REQUIRE(std::getline(fields, k, ','));
    REQUIRE(std::getline(fields, l, ','));
    REQUIRE(std::getline(fields, phase, ','));
    REQUIRE(std::getline(fields, seconds, ','));
    REQUIRE(std::getline(fields, peak, ','));
    CHECK(std::stoll(peak) > 0);
    const std::string key = method + "/" + k;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) it = groups.insert(groups.end(), {key, Group{}});
    const double value = std::strtod(seconds.c_str(), nullptr);
    CHECK(value >= 0.0);
    if (phase == "total") {
      it->second.total = value;
    } else {
      it->second.phases += value;
    }
    ++it->second.rows;
  }
  CHECK(groups.size() == 4);  // two methods at two dims
  for (const auto& [key, group] : groups) {
    CHECK(group.rows == 5);
    // Phase clocks cover all the real work; the total adds only glue. Allow
    // the documented 5% plus a couple of milliseconds of timer noise.
    CHECK(group.phases <= group.total * 1.05 + 2e-3);
    CHECK(group.phases >= group.total * 0.5 - 2e-3);
  }
}
