#pragma once

#include <vector>

#include "ieig/linear_operator.hpp"
#include "ieig/sparse_matrix.hpp"

namespace ieig {

/// v -> (A - sigma I) v
class SiraOperator final : public LinearOperator {
 public:
  SiraOperator(const SparseMatrix& a, Scalar sigma) : a_(&a), sigma_(sigma) {}
  Index size() const override { return a_->size(); }
  void apply(const Vector& x, Vector& y) const override { shifted_matvec(*a_, sigma_, x, y); }

 private:
  const SparseMatrix* a_;
  Scalar sigma_;
};

/// v -> (I - y y^H)(A - sigma I)(I - y y^H) v, one product with A per apply.
class JdOperator final : public LinearOperator {
 public:
  JdOperator(const SparseMatrix& a, Scalar sigma, Vector y);
  Index size() const override { return a_->size(); }
  void apply(const Vector& x, Vector& y) const override;

 private:
  const SparseMatrix* a_;
  Scalar sigma_;
  Vector y_;
  mutable Vector scratch_;
};

SiraOperator make_sira_operator(const SparseMatrix& a, Scalar sigma);
JdOperator make_jd_operator(const SparseMatrix& a, Scalar sigma, const Vector& y);

struct GmresOptions {
  double tol = 1e-10;          // relative to ||b||
  int restart = 30;
  int max_total_iters = 1000;  // per solve
};

struct GmresOutcome {
  Vector solution;
  double achieved_rel_residual = 0.0;  // from a recomputed true residual
  int iterations = 0;                  // applications of op o M^{-1}
  bool converged = false;
  bool stagnated = false;              // a full cycle brought no improvement
  std::vector<double> cycle_residuals; // true relative residual at each restart boundary
};

/// Right-preconditioned restarted GMRES(m) from a zero initial guess.
GmresOutcome gmres_right_preconditioned(const LinearOperator& op, const LinearOperator& precond,
                                        const Vector& b, const GmresOptions& options);

}  // namespace ieig
