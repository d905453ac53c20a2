#include "ieig/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ieig {

namespace {

constexpr Index max_general_dim = 64;
constexpr int max_jacobi_sweeps = 30;

bool mu_less(const Scalar& a, const Scalar& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(Index pivot, double value)
    : DenseError("matrix is not positive definite (pivot " + std::to_string(pivot) +
                 " = " + std::to_string(value) + ")"),
      pivot_(pivot) {}

void normalize_phase(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  Index imax = 0;
  double amax = std::abs(v[0]);
  for (Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (amax == 0.0) return;
  v *= std::conj(v[imax]) / amax;
  v[imax] = Scalar(v[imax].real(), 0.0);
}

std::optional<Orthonormalized> orthonormalize_against(const Eigen::Ref<const DenseMatrix>& basis,
                                                      const Vector& u) {
  const double unorm = u.norm();
  if (unorm == 0.0 || !std::isfinite(unorm)) return std::nullopt;
  Vector v = u;
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < basis.cols(); ++j) {
      const Scalar c = basis.col(j).dot(v);
      v -= c * basis.col(j);
    }
  }
  const double norm = v.norm();
  if (norm <= static_cast<double>(u.size()) * machine_eps * unorm) return std::nullopt;
  v /= norm;
  return Orthonormalized{std::move(v), norm};
}

DenseMatrix cholesky(const DenseMatrix& g) {
  const Index m = g.rows();
  if (g.cols() != m) throw std::invalid_argument("cholesky: matrix is not square");
  double dmax = 0.0;
  for (Index i = 0; i < m; ++i) dmax = std::max(dmax, std::abs(g(i, i)));
  const double tol = 10.0 * static_cast<double>(std::max<Index>(m, 1)) * machine_eps * dmax;

  DenseMatrix l = DenseMatrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    double d = g(j, j).real();
    for (Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > tol)) throw NotPositiveDefinite(j, d);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < m; ++i) {
      Scalar s = g(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<EigPair> eig_general(const DenseMatrix& t) {
  const Index m = t.rows();
  if (t.cols() != m) throw std::invalid_argument("eig_general: matrix is not square");
  if (m > max_general_dim) throw std::invalid_argument("eig_general: dimension exceeds 64");
  std::vector<EigPair> pairs;
  if (m == 0) return pairs;
  Eigen::ComplexEigenSolver<DenseMatrix> es(t, true);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eig_general: shifted QR did not converge");
  }
  pairs.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Vector v = es.eigenvectors().col(i);
    v.normalize();
    normalize_phase(v);
    pairs.push_back({es.eigenvalues()[i], std::move(v)});
  }
  return pairs;
}

std::vector<EigPair> pencil_eig(const DenseMatrix& h, const DenseMatrix& g) {
  if (h.rows() != g.rows() || h.cols() != g.cols() || h.rows() != h.cols()) {
    throw std::invalid_argument("pencil_eig: dimension mismatch");
  }
  const DenseMatrix l = cholesky(g);
  const auto lower = l.triangularView<Eigen::Lower>();
  const DenseMatrix x = lower.solve(h);                        // L^{-1} H
  const DenseMatrix c = lower.solve(x.adjoint()).adjoint();    // L^{-1} H L^{-H}

  std::vector<EigPair> pairs;
  for (auto& [theta, w] : eig_general(c)) {
    if (theta == Scalar(0.0)) continue;
    const Scalar mu = 1.0 / theta;
    if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) continue;
    Vector z = l.adjoint().triangularView<Eigen::Upper>().solve(w);
    z.normalize();
    normalize_phase(z);
    pairs.push_back({mu, std::move(z)});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigPair& a, const EigPair& b) { return mu_less(a.value, b.value); });
  return pairs;
}

EigPair eig_hermitian_smallest(const DenseMatrix& s) {
  const Index m = s.rows();
  if (s.cols() != m || m == 0) throw std::invalid_argument("eig_hermitian_smallest: bad shape");
  const double snorm = s.norm();
  if ((s - s.adjoint()).norm() > 1e-10 * std::max(snorm, std::numeric_limits<double>::min())) {
    throw std::invalid_argument("eig_hermitian_smallest: matrix is not Hermitian");
  }
  DenseMatrix a = 0.5 * (s + s.adjoint());
  DenseMatrix v = DenseMatrix::Identity(m, m);

  bool converged = m == 1;
  for (int sweep = 0; sweep < max_jacobi_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < m - 1; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        const Scalar apq = a(p, q);
        const double mag = std::abs(apq);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        if (mag == 0.0 || mag <= machine_eps * std::sqrt(std::abs(app * aqq)) ||
            mag <= std::numeric_limits<double>::min() * snorm) {
          continue;
        }
        rotated = true;
        const Scalar e = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        // U restricted to (p, q): diag(1, conj(e)) * [[c, s], [-s, c]].
        const Scalar u00 = c, u01 = sn, u10 = -sn * std::conj(e), u11 = c * std::conj(e);
        for (Index k = 0; k < m; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * u00 + akq * u10;
          a(k, q) = akp * u01 + akq * u11;
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * u00 + vkq * u10;
          v(k, q) = vkp * u01 + vkq * u11;
        }
        for (Index k = 0; k < m; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
          a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    converged = !rotated;
  }
  if (!converged) throw NoConvergence("eig_hermitian_smallest: Jacobi did not converge");

  Index imin = 0;
  for (Index i = 1; i < m; ++i) {
    if (a(i, i).real() < a(imin, imin).real()) imin = i;
  }
  Vector z = v.col(imin);
  z.normalize();
  normalize_phase(z);
  return {Scalar(a(imin, imin).real(), 0.0), std::move(z)};
}

SingularTriplet smallest_singular_triplet_qr(const DenseMatrix& w) {
  const Index rows = w.rows(), m = w.cols();
  if (m == 0 || rows < m) throw std::invalid_argument("smallest_singular_triplet_qr: need rows >= cols > 0");
  DenseMatrix q(rows, m);
  DenseMatrix r = DenseMatrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    Vector x = w.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const Scalar c = q.col(i).dot(x);
        r(i, j) += c;
        x -= c * q.col(i);
      }
    }
    const double nrm = x.norm();
    r(j, j) = nrm;
    if (nrm > 0.0) q.col(j) = x / nrm;
    else q.col(j).setZero();
  }

  Eigen::JacobiSVD<DenseMatrix> svd(r, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[m - 1];
  Vector z = svd.matrixV().col(m - 1);
  z.normalize();
  normalize_phase(z);
  const bool deficient = smin <= static_cast<double>(rows) * machine_eps * smax;
  return {smin, std::move(z), deficient};
}

}  // namespace ieig
