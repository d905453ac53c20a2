#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieig/types.hpp"

namespace ieig {

enum class Symmetry { general, symmetric, hermitian, skew_symmetric };
enum class Field { real, complex, integer, pattern };

struct Triplet {
  Index row;
  Index col;
  Scalar value;
};

/// Square compressed-row matrix. Immutable once assembled.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Assembles an n x n matrix from coordinate entries. Duplicates are summed;
  /// column indices are sorted within each row. Entries are taken as given
  /// (no symmetry expansion; the reader does that).
  static SparseMatrix from_triplets(Index n, std::vector<Triplet> entries,
                                    Symmetry symmetry = Symmetry::general);

  static SparseMatrix identity(Index n);

  Index size() const { return n_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  Symmetry symmetry() const { return symmetry_; }

  /// True when every stored value has a zero imaginary part.
  bool is_real() const { return real_; }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const Scalar> values() const { return values_; }

  Scalar coeff(Index i, Index j) const;
  DenseMatrix to_dense() const;

 private:
  Index n_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<Scalar> values_;
  Symmetry symmetry_ = Symmetry::general;
  bool real_ = true;
};

enum class MatrixMarketErrorKind {
  io,
  malformed_header,
  unsupported_format,
  non_square,
  malformed_entry,
  index_out_of_range,
  count_mismatch,
};

class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(MatrixMarketErrorKind kind, long line, const std::string& what);

  MatrixMarketErrorKind kind() const { return kind_; }
  /// 1-based line number in the input, 0 when not tied to a line.
  long line() const { return line_; }

 private:
  MatrixMarketErrorKind kind_;
  long line_;
};

SparseMatrix load_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in);

/// Writes `matrix coordinate <real|complex> general` with every stored entry.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);

/// y = A x, accumulated row by row in column-index order.
void matvec(const SparseMatrix& a, const Vector& x, Vector& y);
Vector matvec(const SparseMatrix& a, const Vector& x);

/// y = A x - sigma x without forming A - sigma I.
void shifted_matvec(const SparseMatrix& a, Scalar sigma, const Vector& x, Vector& y);
Vector shifted_matvec(const SparseMatrix& a, Scalar sigma, const Vector& x);

/// Maximum absolute column sum.
double one_norm(const SparseMatrix& a);

}  // namespace ieig
