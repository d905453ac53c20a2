#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ieig/linear_operator.hpp"
#include "ieig/sparse_matrix.hpp"

namespace ieig {

enum class FillCapKind {
  unbounded,
  absolute,      // at most `fill_cap` off-diagonal entries per row of L and of U
  original_row,  // at most as many entries per row of L (U) as the strict lower (upper) part of A
};

struct IlutOptions {
  double drop_tol = 1e-3;
  FillCapKind fill_kind = FillCapKind::unbounded;
  std::size_t fill_cap = 0;
  bool patch_zero_pivots = true;
};

class ZeroPivot : public std::runtime_error {
 public:
  explicit ZeroPivot(Index row);
  Index row() const { return row_; }

 private:
  Index row_;
};

/// Incomplete factors L (unit lower, diagonal implicit) and U of A - sigma I.
class IlutFactors {
 public:
  Index size() const { return n_; }
  double drop_tol() const { return drop_tol_; }
  Index nnz_lower() const { return static_cast<Index>(l_cols_.size()); }
  /// Includes the diagonal.
  Index nnz_upper() const { return static_cast<Index>(u_cols_.size()); }
  int patched_pivots() const { return patched_pivots_; }

  /// Solves L U x = b in place.
  void solve_in_place(Vector& x) const;
  Vector apply_inverse(const Vector& b) const;

  DenseMatrix lower_dense() const;
  DenseMatrix upper_dense() const;

 private:
  friend IlutFactors ilut_factorize(const SparseMatrix&, Scalar, const IlutOptions&);

  Index n_ = 0;
  double drop_tol_ = 0.0;
  int patched_pivots_ = 0;
  std::vector<Index> l_ptr_{0}, l_cols_;
  std::vector<Scalar> l_vals_;
  // Row i of U starts with its diagonal, followed by strictly upper entries.
  std::vector<Index> u_ptr_{0}, u_cols_;
  std::vector<Scalar> u_vals_;
};

/// Row-wise ILUT of A - sigma I with threshold dropping relative to each
/// row's 2-norm. Throws ZeroPivot only when pivot patching is disabled.
IlutFactors ilut_factorize(const SparseMatrix& a, Scalar sigma, const IlutOptions& options);

class BreakdownScalar : public std::runtime_error {
 public:
  BreakdownScalar() : std::runtime_error("y^H M^{-1} y is numerically zero") {}
};

/// Inverse of (I - y y^H) M (I - y y^H) restricted to the complement of y.
class JdProjectedPreconditioner {
 public:
  JdProjectedPreconditioner(const IlutFactors& base, const Vector& y);

  bool breakdown() const { return breakdown_; }

  /// t = M^{-1} b - (y^H M^{-1} b / y^H M^{-1} y) M^{-1} y. Throws BreakdownScalar.
  Vector apply(const Vector& b) const;
  /// Falls back to (I - y y^H) M^{-1} b when the scalar breaks down.
  Vector apply_with_fallback(const Vector& b) const;

 private:
  const IlutFactors* base_;
  Vector y_;
  Vector t_y_;
  Scalar y_t_y_;
  bool breakdown_ = false;
};

class IlutOperator final : public LinearOperator {
 public:
  explicit IlutOperator(const IlutFactors& f) : f_(&f) {}
  Index size() const override { return f_->size(); }
  void apply(const Vector& x, Vector& y) const override {
    y = x;
    f_->solve_in_place(y);
  }

 private:
  const IlutFactors* f_;
};

class JdPreconditionerOperator final : public LinearOperator {
 public:
  explicit JdPreconditionerOperator(const JdProjectedPreconditioner& p, Index n) : p_(&p), n_(n) {}
  Index size() const override { return n_; }
  void apply(const Vector& x, Vector& y) const override { y = p_->apply_with_fallback(x); }

 private:
  const JdProjectedPreconditioner* p_;
  Index n_;
};

}  // namespace ieig
