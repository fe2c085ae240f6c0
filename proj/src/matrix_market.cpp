#include "krymat/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "krymat/errors.hpp"

namespace krymat {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next line that is neither blank nor a comment. Returns false on EOF.
  bool next_data(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_blank(line) || line.front() == '%') continue;
      return true;
    }
    return false;
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

  std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

template <typename T>
T parse_number(LineReader& reader, const std::string& tok, const char* what) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is available in libstdc++ >= 11; strtod covers older toolchains.
    char* end = nullptr;
    value = std::strtod(first, &end);
    if (end != last) reader.fail(std::string("invalid ") + what + " '" + tok + "'");
    if (!std::isfinite(value)) reader.fail(std::string("non-finite ") + what + " '" + tok + "'");
  } else {
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) reader.fail(std::string("invalid ") + what + " '" + tok + "'");
  }
  return value;
}

struct Header {
  bool coordinate = true;
  bool symmetric = false;
};

Header parse_header(LineReader& reader) {
  std::string line;
  if (!reader.next_raw(line)) reader.fail("empty file");
  const auto toks = split_ws(line);
  if (toks.size() != 5 || lower(toks[0]) != "%%matrixmarket") {
    reader.fail("missing '%%MatrixMarket' banner");
  }
  if (lower(toks[1]) != "matrix") reader.fail("unsupported object '" + toks[1] + "'");
  Header h;
  const std::string format = lower(toks[2]);
  if (format == "coordinate") {
    h.coordinate = true;
  } else if (format == "array") {
    h.coordinate = false;
  } else {
    reader.fail("unsupported format '" + toks[2] + "'");
  }
  const std::string field = lower(toks[3]);
  if (field != "real" && field != "integer" && field != "double") {
    reader.fail("unsupported field '" + toks[3] + "' (only real matrices are supported)");
  }
  const std::string sym = lower(toks[4]);
  if (sym == "general") {
    h.symmetric = false;
  } else if (sym == "symmetric") {
    h.symmetric = true;
  } else {
    reader.fail("unsupported symmetry '" + toks[4] + "'");
  }
  return h;
}

}  // namespace

MarketMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  LineReader reader(in, path.string());
  const Header header = parse_header(reader);

  std::string line;
  if (!reader.next_data(line)) reader.fail("missing size line");
  const auto size = split_ws(line);

  if (header.coordinate) {
    if (size.size() != 3) reader.fail("coordinate size line needs 'rows cols nnz'");
    const auto rows = parse_number<long long>(reader, size[0], "row count");
    const auto cols = parse_number<long long>(reader, size[1], "column count");
    const auto nnz = parse_number<long long>(reader, size[2], "entry count");
    if (rows < 1 || cols < 1 || nnz < 0) reader.fail("invalid dimensions");
    if (header.symmetric && rows != cols) reader.fail("symmetric matrix must be square");
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(header.symmetric ? 2 * nnz : nnz));
    for (long long e = 0; e < nnz; ++e) {
      if (!reader.next_data(line)) reader.fail("expected " + std::to_string(nnz) + " entries");
      const auto t = split_ws(line);
      if (t.size() != 3) reader.fail("entry needs 'row col value'");
      const auto i = parse_number<long long>(reader, t[0], "row index");
      const auto j = parse_number<long long>(reader, t[1], "column index");
      const double v = parse_number<double>(reader, t[2], "value");
      if (i < 1 || i > rows || j < 1 || j > cols) reader.fail("index out of range");
      if (header.symmetric && j > i) reader.fail("symmetric file has an entry above the diagonal");
      trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
      if (header.symmetric && i != j) trips.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    }
    if (reader.next_data(line)) reader.fail("trailing data after the last entry");
    SparseMat m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
  }

  if (size.size() != 2) reader.fail("array size line needs 'rows cols'");
  const auto rows = parse_number<long long>(reader, size[0], "row count");
  const auto cols = parse_number<long long>(reader, size[1], "column count");
  if (rows < 1 || cols < 1) reader.fail("invalid dimensions");
  if (header.symmetric && rows != cols) reader.fail("symmetric matrix must be square");
  DenseMat m = DenseMat::Zero(rows, cols);
  // Column-major; symmetric arrays list only the lower triangle.
  for (long long j = 0; j < cols; ++j) {
    for (long long i = header.symmetric ? j : 0; i < rows; ++i) {
      if (!reader.next_data(line)) reader.fail("too few array entries");
      const auto t = split_ws(line);
      if (t.size() != 1) reader.fail("array entry must be a single value");
      const double v = parse_number<double>(reader, t[0], "value");
      m(i, j) = v;
      if (header.symmetric) m(j, i) = v;
    }
  }
  if (reader.next_data(line)) reader.fail("trailing data after the last entry");
  return m;
}

SparseMat read_sparse(const std::filesystem::path& path) {
  auto m = read_matrix_market(path);
  if (auto* s = std::get_if<SparseMat>(&m)) return std::move(*s);
  return sparse_from_dense(std::get<DenseMat>(m));
}

DenseMat read_dense(const std::filesystem::path& path) {
  auto m = read_matrix_market(path);
  if (auto* d = std::get_if<DenseMat>(&m)) return std::move(*d);
  return DenseMat(std::get<SparseMat>(m));
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

}  // namespace

void write_matrix_market(const std::filesystem::path& path, const SparseMat& m) {
  auto out = open_for_write(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(m, i); it; ++it) {
      out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_matrix_market(const std::filesystem::path& path, const DenseMat& m) {
  auto out = open_for_write(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace krymat
