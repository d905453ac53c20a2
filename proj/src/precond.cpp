#include "ieig/precond.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace ieig {

namespace {

struct Entry {
  Index col;
  Scalar value;
};

// Keeps the `cap` largest-magnitude entries, then restores column order.
void keep_largest(std::vector<Entry>& entries, std::size_t cap) {
  if (entries.size() > cap) {
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(cap),
                     entries.end(), [](const Entry& a, const Entry& b) {
                       const double ma = std::abs(a.value), mb = std::abs(b.value);
                       return ma != mb ? ma > mb : a.col < b.col;
                     });
    entries.resize(cap);
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.col < b.col; });
}

}  // namespace

ZeroPivot::ZeroPivot(Index row)
    : std::runtime_error("zero pivot in incomplete factorization at row " + std::to_string(row)),
      row_(row) {}

IlutFactors ilut_factorize(const SparseMatrix& a, Scalar sigma, const IlutOptions& options) {
  if (!(options.drop_tol >= 0.0)) throw std::invalid_argument("drop tolerance must be >= 0");
  const Index n = a.size();
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();

  IlutFactors f;
  f.n_ = n;
  f.drop_tol_ = options.drop_tol;

  std::vector<Scalar> work(static_cast<std::size_t>(n), 0.0);
  std::vector<char> present(static_cast<std::size_t>(n), 0);
  std::vector<Index> pattern;
  std::priority_queue<Index, std::vector<Index>, std::greater<>> pending;
  std::vector<Entry> lower, upper;

  for (Index i = 0; i < n; ++i) {
    pattern.clear();
    std::size_t orig_lower = 0, orig_upper = 0;
    auto touch = [&](Index j) {
      if (!present[j]) {
        present[j] = 1;
        pattern.push_back(j);
        if (j < i) pending.push(j);
      }
    };
    for (Index k = rp[i]; k < rp[i + 1]; ++k) {
      const Index j = ci[k];
      touch(j);
      work[j] += va[k];
      if (j < i) ++orig_lower;
      else if (j > i) ++orig_upper;
    }
    touch(i);
    work[i] -= sigma;
    const Scalar original_diag = work[i];

    double row_norm = 0.0;
    for (Index j : pattern) row_norm += std::norm(work[j]);
    row_norm = std::sqrt(row_norm);
    const double tau = options.drop_tol * row_norm;

    while (!pending.empty()) {
      const Index k = pending.top();
      pending.pop();
      const Scalar lik = work[k] / f.u_vals_[f.u_ptr_[k]];
      if (std::abs(lik) < tau || lik == Scalar(0.0)) {
        work[k] = 0.0;
        continue;
      }
      work[k] = lik;
      for (Index p = f.u_ptr_[k] + 1; p < f.u_ptr_[k + 1]; ++p) {
        const Index j = f.u_cols_[p];
        touch(j);
        work[j] -= lik * f.u_vals_[p];
      }
    }

    lower.clear();
    upper.clear();
    Scalar diag = 0.0;
    for (Index j : pattern) {
      const Scalar v = work[j];
      if (j == i) diag = v;
      else if (v != Scalar(0.0) && std::abs(v) >= tau) (j < i ? lower : upper).push_back({j, v});
      work[j] = 0.0;
      present[j] = 0;
    }

    std::size_t cap_l = lower.size(), cap_u = upper.size();
    if (options.fill_kind == FillCapKind::absolute) {
      cap_l = options.fill_cap;
      cap_u = options.fill_cap;
    } else if (options.fill_kind == FillCapKind::original_row) {
      cap_l = orig_lower;
      cap_u = orig_upper;
    }
    keep_largest(lower, cap_l);
    keep_largest(upper, cap_u);

    if (std::abs(diag) < machine_eps * row_norm || diag == Scalar(0.0)) {
      if (!options.patch_zero_pivots) throw ZeroPivot(i);
      const double scale = (options.drop_tol > 0.0 ? options.drop_tol : std::sqrt(machine_eps)) *
                           (row_norm > 0.0 ? row_norm : 1.0);
      const double odm = std::abs(original_diag);
      diag = scale * (odm > 0.0 ? original_diag / odm : Scalar(1.0));
      ++f.patched_pivots_;
    }

    for (const auto& e : lower) {
      f.l_cols_.push_back(e.col);
      f.l_vals_.push_back(e.value);
    }
    f.l_ptr_.push_back(static_cast<Index>(f.l_cols_.size()));
    f.u_cols_.push_back(i);
    f.u_vals_.push_back(diag);
    for (const auto& e : upper) {
      f.u_cols_.push_back(e.col);
      f.u_vals_.push_back(e.value);
    }
    f.u_ptr_.push_back(static_cast<Index>(f.u_cols_.size()));
  }
  return f;
}

void IlutFactors::solve_in_place(Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("ILUT solve: dimension mismatch");
  for (Index i = 0; i < n_; ++i) {
    Scalar s = x[i];
    for (Index p = l_ptr_[i]; p < l_ptr_[i + 1]; ++p) s -= l_vals_[p] * x[l_cols_[p]];
    x[i] = s;
  }
  for (Index i = n_ - 1; i >= 0; --i) {
    Scalar s = x[i];
    for (Index p = u_ptr_[i] + 1; p < u_ptr_[i + 1]; ++p) s -= u_vals_[p] * x[u_cols_[p]];
    x[i] = s / u_vals_[u_ptr_[i]];
  }
}

Vector IlutFactors::apply_inverse(const Vector& b) const {
  Vector x = b;
  solve_in_place(x);
  return x;
}

DenseMatrix IlutFactors::lower_dense() const {
  DenseMatrix l = DenseMatrix::Identity(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index p = l_ptr_[i]; p < l_ptr_[i + 1]; ++p) l(i, l_cols_[p]) = l_vals_[p];
  }
  return l;
}

DenseMatrix IlutFactors::upper_dense() const {
  DenseMatrix u = DenseMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index p = u_ptr_[i]; p < u_ptr_[i + 1]; ++p) u(i, u_cols_[p]) = u_vals_[p];
  }
  return u;
}

JdProjectedPreconditioner::JdProjectedPreconditioner(const IlutFactors& base, const Vector& y)
    : base_(&base), y_(y) {
  t_y_ = base.apply_inverse(y_);
  y_t_y_ = y_.dot(t_y_);
  breakdown_ = !(std::abs(y_t_y_) >= machine_eps * t_y_.norm()) || t_y_.norm() == 0.0;
}

Vector JdProjectedPreconditioner::apply(const Vector& b) const {
  if (breakdown_) throw BreakdownScalar();
  Vector t = base_->apply_inverse(b);
  t -= (y_.dot(t) / y_t_y_) * t_y_;
  t -= y_.dot(t) * y_;
  return t;
}

Vector JdProjectedPreconditioner::apply_with_fallback(const Vector& b) const {
  if (!breakdown_) return apply(b);
  Vector t = base_->apply_inverse(b);
  t -= y_.dot(t) * y_;
  return t;
}

}  // namespace ieig
