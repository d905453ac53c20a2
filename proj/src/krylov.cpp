#include "ieig/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ieig {

namespace {

// Rotation [[c, s], [-conj(s), c]] that zeroes b in (a, b).
void make_givens(const Scalar& a, const Scalar& b, double& c, Scalar& s) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (mb == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (ma == 0.0) {
    c = 0.0;
    s = std::conj(b) / mb;
    return;
  }
  const double r = std::hypot(ma, mb);
  c = ma / r;
  s = (a / ma) * std::conj(b) / r;
}

}  // namespace

JdOperator::JdOperator(const SparseMatrix& a, Scalar sigma, Vector y)
    : a_(&a), sigma_(sigma), y_(std::move(y)) {
  if (y_.size() != a.size()) throw std::invalid_argument("JdOperator: dimension mismatch");
}

void JdOperator::apply(const Vector& x, Vector& y) const {
  scratch_ = x - y_.dot(x) * y_;
  shifted_matvec(*a_, sigma_, scratch_, y);
  y -= y_.dot(y) * y_;
}

SiraOperator make_sira_operator(const SparseMatrix& a, Scalar sigma) { return {a, sigma}; }

JdOperator make_jd_operator(const SparseMatrix& a, Scalar sigma, const Vector& y) {
  return {a, sigma, y};
}

GmresOutcome gmres_right_preconditioned(const LinearOperator& op, const LinearOperator& precond,
                                        const Vector& b, const GmresOptions& options) {
  const Index n = op.size();
  if (b.size() != n || precond.size() != n) {
    throw std::invalid_argument("gmres: dimension mismatch");
  }
  if (options.restart < 1) throw std::invalid_argument("gmres: restart length must be >= 1");

  GmresOutcome out;
  out.solution = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  const int m = options.restart;
  DenseMatrix basis(n, m + 1);
  DenseMatrix hess = DenseMatrix::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Scalar> sn(static_cast<std::size_t>(m));
  Vector g(m + 1);
  Vector w(n), z(n), r = b;

  Vector x = Vector::Zero(n);
  Vector best = x;
  double best_rel = 1.0;
  double prev_rel = 1.0;
  bool first = true;

  while (true) {
    double rel;
    if (first) {
      rel = 1.0;
    } else {
      op.apply(x, w);
      r = b - w;
      rel = r.norm() / bnorm;
    }
    out.cycle_residuals.push_back(rel);
    if (rel < best_rel || first) {
      best_rel = rel;
      best = x;
    }
    if (!first) {
      if (rel <= options.tol) {
        out.converged = true;
        break;
      }
      if (out.iterations >= options.max_total_iters) break;
      if (rel >= prev_rel) {
        out.stagnated = true;
        break;
      }
    }
    first = false;
    prev_rel = rel;

    const double beta = r.norm();
    basis.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hess.setZero();

    int k = 0;
    for (int j = 0; j < m && out.iterations < options.max_total_iters; ++j) {
      precond.apply(basis.col(j), z);
      op.apply(z, w);
      ++out.iterations;

      const double before = w.norm();
      for (int i = 0; i <= j; ++i) {
        const Scalar h = basis.col(i).dot(w);
        hess(i, j) = h;
        w -= h * basis.col(i);
      }
      double after = w.norm();
      if (after < before / 100.0) {
        for (int i = 0; i <= j; ++i) {
          const Scalar h = basis.col(i).dot(w);
          hess(i, j) += h;
          w -= h * basis.col(i);
        }
        after = w.norm();
      }
      hess(j + 1, j) = after;

      for (int i = 0; i < j; ++i) {
        const Scalar t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -std::conj(sn[i]) * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      make_givens(hess(j, j), hess(j + 1, j), cs[j], sn[j]);
      hess(j, j) = cs[j] * hess(j, j) + sn[j] * hess(j + 1, j);
      hess(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];
      k = j + 1;

      const bool happy = after <= machine_eps * before;
      if (happy || std::abs(g[j + 1]) / bnorm <= options.tol) break;
      basis.col(j + 1) = w / after;
    }
    if (k == 0) break;

    Vector coeff = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    w = basis.leftCols(k) * coeff;
    precond.apply(w, z);
    x += z;
  }

  out.solution = std::move(best);
  out.achieved_rel_residual = best_rel;
  if (!out.converged) out.converged = best_rel <= options.tol;
  return out;
}

}  // namespace ieig
