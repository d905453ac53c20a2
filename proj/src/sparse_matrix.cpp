#include "ieig/sparse_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ieig {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void check_dimension(const SparseMatrix& a, const Vector& x) {
  if (x.size() != a.size()) {
    throw std::invalid_argument("dimension mismatch: matrix is " + std::to_string(a.size()) +
                                ", vector is " + std::to_string(x.size()));
  }
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(Index n, std::vector<Triplet> entries,
                                         Symmetry symmetry) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::out_of_range("triplet index out of range");
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n_ = n;
  m.symmetry_ = symmetry;
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
  }
  for (Index i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  m.real_ = std::all_of(m.values_.begin(), m.values_.end(),
                        [](const Scalar& v) { return v.imag() == 0.0; });
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, std::move(t));
}

Scalar SparseMatrix::coeff(Index i, Index j) const {
  auto first = col_idx_.begin() + row_ptr_[i];
  auto last = col_idx_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  }
  return d;
}

MatrixMarketError::MatrixMarketError(MatrixMarketErrorKind kind, long line,
                                     const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      kind_(kind),
      line_(line) {}

SparseMatrix read_matrix_market(std::istream& in) {
  using K = MatrixMarketErrorKind;
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw MatrixMarketError(K::malformed_header, 1, "empty input");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field_name, symmetry_name;
  banner >> tag >> object >> format >> field_name >> symmetry_name;
  if (tag != "%%MatrixMarket" || symmetry_name.empty()) {
    throw MatrixMarketError(K::malformed_header, lineno, "expected '%%MatrixMarket matrix "
                                                         "coordinate <field> <symmetry>'");
  }
  object = lowercase(object);
  format = lowercase(format);
  field_name = lowercase(field_name);
  symmetry_name = lowercase(symmetry_name);
  if (object != "matrix") {
    throw MatrixMarketError(K::unsupported_format, lineno, "unsupported object '" + object + "'");
  }
  if (format == "array") {
    throw MatrixMarketError(K::unsupported_format, lineno, "dense array format is not supported");
  }
  if (format != "coordinate") {
    throw MatrixMarketError(K::malformed_header, lineno, "unknown format '" + format + "'");
  }

  Field field;
  if (field_name == "real") field = Field::real;
  else if (field_name == "complex") field = Field::complex;
  else if (field_name == "integer") field = Field::integer;
  else if (field_name == "pattern") field = Field::pattern;
  else throw MatrixMarketError(K::malformed_header, lineno, "unknown field '" + field_name + "'");

  Symmetry symmetry;
  if (symmetry_name == "general") symmetry = Symmetry::general;
  else if (symmetry_name == "symmetric") symmetry = Symmetry::symmetric;
  else if (symmetry_name == "hermitian") symmetry = Symmetry::hermitian;
  else if (symmetry_name == "skew-symmetric") symmetry = Symmetry::skew_symmetric;
  else {
    throw MatrixMarketError(K::malformed_header, lineno,
                            "unknown symmetry '" + symmetry_name + "'");
  }

  // Size line, after comments and blank lines.
  bool have_size = false;
  long rows = 0, cols = 0, declared = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || is_blank(line)) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> rows >> cols >> declared) || (ss >> extra) || rows < 0 || cols < 0 ||
        declared < 0) {
      throw MatrixMarketError(K::malformed_header, lineno, "malformed size line");
    }
    have_size = true;
    break;
  }
  if (!have_size) throw MatrixMarketError(K::malformed_header, lineno + 1, "missing size line");
  if (rows != cols) {
    throw MatrixMarketError(K::non_square, lineno,
                            "matrix is " + std::to_string(rows) + " x " + std::to_string(cols));
  }

  const Index n = rows;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(symmetry == Symmetry::general ? declared
                                                                         : 2 * declared));
  long read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || is_blank(line)) continue;
    if (read == declared) {
      throw MatrixMarketError(K::count_mismatch, lineno,
                              "more entries than the declared " + std::to_string(declared));
    }
    std::istringstream ss(line);
    long i = 0, j = 0;
    double re = 1.0, im = 0.0;
    bool ok = static_cast<bool>(ss >> i >> j);
    if (ok && field != Field::pattern) ok = static_cast<bool>(ss >> re);
    if (ok && field == Field::complex) ok = static_cast<bool>(ss >> im);
    std::string extra;
    if (!ok || (ss >> extra)) throw MatrixMarketError(K::malformed_entry, lineno, "malformed entry");
    if (i < 1 || i > n || j < 1 || j > n) {
      throw MatrixMarketError(K::index_out_of_range, lineno,
                              "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") outside 1.." + std::to_string(n));
    }
    const Scalar v(re, im);
    const Index r = i - 1, c = j - 1;
    entries.push_back({r, c, v});
    if (r != c) {
      switch (symmetry) {
        case Symmetry::general: break;
        case Symmetry::symmetric: entries.push_back({c, r, v}); break;
        case Symmetry::hermitian: entries.push_back({c, r, std::conj(v)}); break;
        case Symmetry::skew_symmetric: entries.push_back({c, r, -v}); break;
      }
    }
    ++read;
  }
  if (read != declared) {
    throw MatrixMarketError(K::count_mismatch, lineno,
                            "found " + std::to_string(read) + " entries, header declares " +
                                std::to_string(declared));
  }
  return SparseMatrix::from_triplets(n, std::move(entries), symmetry);
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MatrixMarketError(MatrixMarketErrorKind::io, 0, "cannot open " + path.string());
  }
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  const bool real = a.is_real();
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << a.size() << ' ' << a.size() << ' ' << a.nnz() << '\n';
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  char buf[96];
  for (Index i = 0; i < a.size(); ++i) {
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      if (real) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(i + 1),
                      static_cast<long>(ci[k] + 1), va[k].real());
      } else {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(i + 1),
                      static_cast<long>(ci[k] + 1), va[k].real(), va[k].imag());
      }
      out << buf;
    }
  }
}

void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix_market(out, a);
}

void matvec(const SparseMatrix& a, const Vector& x, Vector& y) {
  check_dimension(a, x);
  y.resize(a.size());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (Index i = 0; i < a.size(); ++i) {
    Scalar s = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
    y[i] = s;
  }
}

Vector matvec(const SparseMatrix& a, const Vector& x) {
  Vector y;
  matvec(a, x, y);
  return y;
}

void shifted_matvec(const SparseMatrix& a, Scalar sigma, const Vector& x, Vector& y) {
  check_dimension(a, x);
  y.resize(a.size());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (Index i = 0; i < a.size(); ++i) {
    Scalar s = 0.0;
    for (Index k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
    y[i] = s - sigma * x[i];
  }
}

Vector shifted_matvec(const SparseMatrix& a, Scalar sigma, const Vector& x) {
  Vector y;
  shifted_matvec(a, sigma, x, y);
  return y;
}

double one_norm(const SparseMatrix& a) {
  std::vector<double> colsum(static_cast<std::size_t>(a.size()), 0.0);
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t k = 0; k < va.size(); ++k) colsum[ci[k]] += std::abs(va[k]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

}  // namespace ieig
