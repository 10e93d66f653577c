#include "lazypca/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lazypca/error.hpp"

namespace lazypca {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct MmHeader {
  bool coordinate = false;
};

// Parses the banner line and validates we support the flavor.
MmHeader parse_mm_banner(const std::string& line, std::int64_t line_no) {
  std::istringstream ls(line);
  std::string banner, object, format, field, symmetry;
  ls >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket")
    throw ParseError("missing %%MatrixMarket banner", line_no);
  if (lower(object) != "matrix")
    throw ParseError("unsupported MatrixMarket object '" + object + "'", line_no);
  MmHeader h;
  const std::string fmt = lower(format);
  if (fmt == "coordinate") h.coordinate = true;
  else if (fmt == "array") h.coordinate = false;
  else throw ParseError("unsupported MatrixMarket format '" + format + "'", line_no);
  const std::string fld = lower(field);
  if (fld != "real" && fld != "integer" && fld != "double")
    throw ParseError("unsupported MatrixMarket field '" + field + "'", line_no);
  if (lower(symmetry) != "general")
    throw ParseError("unsupported MatrixMarket symmetry '" + symmetry + "'", line_no);
  return h;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// Reads banner + comments, leaves the stream at the size line. Returns the
// header; line_no is advanced past everything consumed.
MmHeader consume_mm_preamble(std::istream& in, std::int64_t& line_no, std::string& size_line) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty MatrixMarket file", 1);
  ++line_no;
  MmHeader h = parse_mm_banner(line, line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    size_line = line;
    return h;
  }
  throw ParseError("MatrixMarket file ends before the size line", line_no);
}

void parse_longs(const std::string& line, std::int64_t line_no, std::int64_t* out, int count) {
  std::istringstream ls(line);
  for (int i = 0; i < count; ++i)
    if (!(ls >> out[i])) throw ParseError("expected " + std::to_string(count) + " integers", line_no);
  std::string rest;
  if (ls >> rest) throw ParseError("trailing tokens after size line", line_no);
}

double parse_value(const char* s, char** end, std::int64_t line_no) {
  errno = 0;
  const double v = std::strtod(s, end);
  if (*end == s) throw ParseError("expected a numeric value", line_no);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
  return v;
}

struct MmEntry {
  index_t row, col;
  double value;
};

// Parses one coordinate entry line in place.
bool parse_coord_line(const std::string& line, std::int64_t line_no, index_t rows, index_t cols,
                      MmEntry& e) {
  if (line.empty() || blank(line)) return false;
  char* pos = nullptr;
  errno = 0;
  const long long i = std::strtoll(line.c_str(), &pos, 10);
  if (pos == line.c_str()) throw ParseError("expected row index", line_no);
  const char* after_i = pos;
  const long long j = std::strtoll(after_i, &pos, 10);
  if (pos == after_i) throw ParseError("expected column index", line_no);
  e.value = parse_value(pos, &pos, line_no);
  while (*pos != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*pos)))
      throw ParseError("trailing tokens after entry", line_no);
    ++pos;
  }
  if (i < 1 || i > rows)
    throw ParseError("row index " + std::to_string(i) + " outside 1.." + std::to_string(rows), line_no);
  if (j < 1 || j > cols)
    throw ParseError("column index " + std::to_string(j) + " outside 1.." + std::to_string(cols), line_no);
  e.row = static_cast<index_t>(i - 1);
  e.col = static_cast<index_t>(j - 1);
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  // Shortest representation that round-trips; %.17g always round-trips, but try
  // shorter forms first so files stay readable.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

SparseMatrix read_sparse_matrix_market(std::istream& in) {
  std::int64_t line_no = 0;
  std::string size_line;
  MmHeader h = consume_mm_preamble(in, line_no, size_line);
  if (!h.coordinate)
    throw ParseError("expected a coordinate (sparse) MatrixMarket file", line_no);
  std::int64_t dims[3];
  parse_longs(size_line, line_no, dims, 3);
  const index_t rows = dims[0], cols = dims[1], nnz = dims[2];
  if (rows < 0 || cols < 0 || nnz < 0) throw ParseError("negative size entry", line_no);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::string line;
  std::int64_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    MmEntry e;
    if (line[0] == '%') continue;
    if (!parse_coord_line(line, line_no, rows, cols, e)) continue;
    entries.push_back({e.row, e.col, e.value});
    ++seen;
  }
  if (seen != nnz)
    throw ParseError("entry count " + std::to_string(seen) + " does not match header nnz " +
                     std::to_string(nnz), line_no);
  return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

SparseMatrix read_sparse_matrix_market_file(const std::string& path) {
  auto in = open_input(path);
  return read_sparse_matrix_market(in);
}

void write_sparse_matrix_market(const SparseMatrix& x, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << x.rows() << ' ' << x.cols() << ' ' << x.nnz() << '\n';
  const auto& ptr = x.col_ptr();
  const auto& idx = x.row_idx();
  const auto& val = x.values();
  for (index_t j = 0; j < x.cols(); ++j)
    for (index_t p = ptr[static_cast<std::size_t>(j)]; p < ptr[static_cast<std::size_t>(j) + 1]; ++p)
      out << idx[static_cast<std::size_t>(p)] + 1 << ' ' << j + 1 << ' '
          << format_double(val[static_cast<std::size_t>(p)]) << '\n';
}

void write_sparse_matrix_market_file(const SparseMatrix& x, const std::string& path) {
  auto out = open_output(path);
  write_sparse_matrix_market(x, out);
}

DenseMatrix read_dense_matrix_market(std::istream& in) {
  std::int64_t line_no = 0;
  std::string size_line;
  MmHeader h = consume_mm_preamble(in, line_no, size_line);
  if (h.coordinate)
    throw ParseError("expected an array (dense) MatrixMarket file", line_no);
  std::int64_t dims[2];
  parse_longs(size_line, line_no, dims, 2);
  const index_t rows = dims[0], cols = dims[1];
  if (rows < 0 || cols < 0) throw ParseError("negative size entry", line_no);

  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    while (*s != '\0') {
      while (std::isspace(static_cast<unsigned char>(*s))) ++s;
      if (*s == '\0') break;
      data.push_back(parse_value(s, &end, line_no));
      s = end;
    }
  }
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw ParseError("array payload has " + std::to_string(data.size()) + " values, expected " +
                     std::to_string(rows * cols), line_no);
  return DenseMatrix(rows, cols, std::move(data));
}

DenseMatrix read_dense_matrix_market_file(const std::string& path) {
  auto in = open_input(path);
  return read_dense_matrix_market(in);
}

void write_dense_matrix_market(const DenseMatrix& x, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n";
  out << x.rows() << ' ' << x.cols() << '\n';
  for (index_t j = 0; j < x.cols(); ++j)
    for (index_t i = 0; i < x.rows(); ++i) out << format_double(x(i, j)) << '\n';
}

void write_dense_matrix_market_file(const DenseMatrix& x, const std::string& path) {
  auto out = open_output(path);
  write_dense_matrix_market(x, out);
}

DenseMatrix read_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::vector<double> row;
    const char* s = line.c_str();
    char* end = nullptr;
    while (true) {
      row.push_back(parse_value(s, &end, line_no));
      s = end;
      while (std::isspace(static_cast<unsigned char>(*s))) ++s;
      if (*s == '\0') break;
      if (*s != ',') throw ParseError("expected ',' between values", line_no);
      ++s;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                       std::to_string(rows.front().size()), line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return DenseMatrix();
  const index_t m = static_cast<index_t>(rows.size());
  const index_t n = static_cast<index_t>(rows.front().size());
  DenseMatrix out(m, n);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < n; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

DenseMatrix read_dense_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_dense_csv(in);
}

void write_dense_csv(const DenseMatrix& x, std::ostream& out) {
  for (index_t i = 0; i < x.rows(); ++i) {
    for (index_t j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

void write_dense_csv_file(const DenseMatrix& x, const std::string& path) {
  auto out = open_output(path);
  write_dense_csv(x, out);
}

SparseMatrix sparsify(const DenseMatrix& x) {
  std::vector<index_t> ptr(static_cast<std::size_t>(x.cols()) + 1, 0);
  std::vector<index_t> idx;
  std::vector<double> val;
  for (index_t j = 0; j < x.cols(); ++j) {
    for (index_t i = 0; i < x.rows(); ++i) {
      const double v = x(i, j);
      if (v != 0.0) {
        idx.push_back(i);
        val.push_back(v);
      }
    }
    ptr[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(idx.size());
  }
  return SparseMatrix::from_csc(x.rows(), x.cols(), std::move(ptr), std::move(idx), std::move(val));
}

MatrixMarketRowBlockStream::MatrixMarketRowBlockStream(const std::string& path, index_t block_rows)
    : path_(path), block_rows_(block_rows) {
  if (block_rows < 1) throw InvalidArgumentError("block_rows must be at least 1");
  auto in = open_input(path);
  std::int64_t line_no = 0;
  std::string size_line;
  MmHeader h = consume_mm_preamble(in, line_no, size_line);
  if (!h.coordinate) throw ParseError("expected a coordinate (sparse) MatrixMarket file", line_no);
  std::int64_t dims[3];
  parse_longs(size_line, line_no, dims, 3);
  rows_ = dims[0];
  cols_ = dims[1];
  const index_t nnz = dims[2];
  slice_count_ = rows_ == 0 ? 0 : (rows_ + block_rows - 1) / block_rows;
  block_nnz_.assign(static_cast<std::size_t>(slice_count_ == 0 ? 1 : slice_count_), 0);

  // Counting pass: validates every entry once and records per-block capacity.
  std::string line;
  std::int64_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    MmEntry e;
    if (!parse_coord_line(line, line_no, rows_, cols_, e)) continue;
    ++block_nnz_[static_cast<std::size_t>(e.row / block_rows_)];
    ++seen;
  }
  if (seen != nnz)
    throw ParseError("entry count " + std::to_string(seen) + " does not match header nnz " +
                     std::to_string(nnz), line_no);
}

std::optional<RowBlock> MatrixMarketRowBlockStream::next() {
  if (next_slice_ >= slice_count_) return std::nullopt;
  const index_t slice = next_slice_++;
  const index_t lo = slice * block_rows_;
  const index_t hi = std::min(lo + block_rows_, rows_);

  auto in = open_input(path_);
  std::int64_t line_no = 0;
  std::string size_line;
  consume_mm_preamble(in, line_no, size_line);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(block_nnz_[static_cast<std::size_t>(slice)]));
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    MmEntry e;
    if (!parse_coord_line(line, line_no, rows_, cols_, e)) continue;
    if (e.row >= lo && e.row < hi) entries.push_back({e.row - lo, e.col, e.value});
  }
  return RowBlock{slice, SparseMatrix::from_triplets(hi - lo, cols_, std::move(entries))};
}

struct CsvRowBlockStream::Impl {
  std::ifstream in;
  std::int64_t line_no = 0;
  std::vector<double> pending;  // first row, parsed during construction
  bool pending_valid = false;
  bool done = false;
};

CsvRowBlockStream::CsvRowBlockStream(const std::string& path, index_t block_rows)
    : impl_(std::make_unique<Impl>()), block_rows_(block_rows) {
  if (block_rows < 1) throw InvalidArgumentError("block_rows must be at least 1");
  impl_->in.open(path);
  if (!impl_->in) throw ParseError("cannot open '" + path + "' for reading");
  std::string line;
  while (std::getline(impl_->in, line)) {
    ++impl_->line_no;
    if (blank(line)) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    while (true) {
      impl_->pending.push_back(parse_value(s, &end, impl_->line_no));
      s = end;
      while (std::isspace(static_cast<unsigned char>(*s))) ++s;
      if (*s == '\0') break;
      if (*s != ',') throw ParseError("expected ',' between values", impl_->line_no);
      ++s;
    }
    impl_->pending_valid = true;
    cols_ = static_cast<index_t>(impl_->pending.size());
    return;
  }
  impl_->done = true;  // empty file: zero blocks
}

CsvRowBlockStream::~CsvRowBlockStream() = default;

std::optional<RowBlock> CsvRowBlockStream::next() {
  if (impl_->done) return std::nullopt;
  std::vector<Triplet> entries;
  index_t filled = 0;
  std::string line;
  auto take_row = [&](const std::vector<double>& row) {
    for (index_t j = 0; j < cols_; ++j)
      if (row[static_cast<std::size_t>(j)] != 0.0)
        entries.push_back({filled, j, row[static_cast<std::size_t>(j)]});
    ++filled;
  };
  if (impl_->pending_valid) {
    take_row(impl_->pending);
    impl_->pending_valid = false;
  }
  std::vector<double> row;
  while (filled < block_rows_ && std::getline(impl_->in, line)) {
    ++impl_->line_no;
    if (blank(line)) continue;
    row.clear();
    const char* s = line.c_str();
    char* end = nullptr;
    while (true) {
      row.push_back(parse_value(s, &end, impl_->line_no));
      s = end;
      while (std::isspace(static_cast<unsigned char>(*s))) ++s;
      if (*s == '\0') break;
      if (*s != ',') throw ParseError("expected ',' between values", impl_->line_no);
      ++s;
    }
    if (static_cast<index_t>(row.size()) != cols_)
      throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                       std::to_string(cols_), impl_->line_no);
    take_row(row);
  }
  if (filled < block_rows_) impl_->done = true;
  if (filled == 0) return std::nullopt;
  return RowBlock{next_slice_++, SparseMatrix::from_triplets(filled, cols_, std::move(entries))};
}

}  // namespace lazypca
