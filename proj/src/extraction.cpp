#include "ieig/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ieig/dense.hpp"

namespace ieig {

namespace {

constexpr double reorth_trigger = 1e-8;

struct HarmonicCore {
  Scalar rho;
  Vector z;
  std::vector<Scalar> values;
};

// z^H H^H z + sigma
Scalar rayleigh_from_h(const SubspaceState& state, const Vector& z) {
  const Vector hz = state.h() * z;
  return std::conj(z.dot(hz)) + state.sigma();
}

HarmonicCore harmonic_core(const SubspaceState& state) {
  const Index m = state.dim();
  if (m < 1) throw std::invalid_argument("extraction needs a nonempty subspace");
  HarmonicCore core;
  if (m == 1) {
    const Scalar h = state.h()(0, 0);
    const Scalar g = state.g()(0, 0);
    if (!(g.real() > 0.0)) throw NotPositiveDefinite(0, g.real());
    core.z = Vector::Ones(1);
    if (h != Scalar(0.0)) core.values.push_back(g / h + state.sigma());
  } else {
    auto pairs = pencil_eig(state.h(), state.g());
    if (pairs.empty()) throw DenseError("pencil has no finite harmonic values");
    core.z = std::move(pairs.front().vector);
    // pencil_eig orders by |mu| = |nu - sigma| already.
    core.values.reserve(pairs.size());
    for (const auto& p : pairs) core.values.push_back(p.value + state.sigma());
  }
  core.rho = rayleigh_from_h(state, core.z);
  return core;
}

Extraction finish(ExtractionKind kind, const SubspaceState& state, const SparseMatrix& a,
                  Scalar rho, Vector coeffs, std::vector<Scalar> values) {
  Extraction e;
  e.kind = kind;
  e.rho = rho;
  e.y = state.basis() * coeffs;
  const double ynorm = e.y.norm();
  e.y /= ynorm;
  coeffs /= ynorm;
  e.coeffs = std::move(coeffs);
  e.residual = matvec(a, e.y) - rho * e.y;
  e.residual_norm = e.residual.norm();
  e.values = std::move(values);
  return e;
}

}  // namespace

SubspaceState::SubspaceState(Index n, Scalar sigma, Index capacity)
    : sigma_(sigma),
      v_(n, capacity),
      w_(n, capacity),
      h_(DenseMatrix::Zero(capacity, capacity)),
      g_(DenseMatrix::Zero(capacity, capacity)) {
  if (capacity < 1) throw std::invalid_argument("subspace capacity must be positive");
}

void SubspaceState::expand(const SparseMatrix& a, const Vector& v) {
  if (m_ == capacity()) throw std::length_error("subspace is full; restart instead");
  if (v.size() != n() || a.size() != n()) throw std::invalid_argument("expand: dimension mismatch");

  Vector vn = v;
  const double loss = m_ > 0 ? (basis().adjoint() * v).cwiseAbs().maxCoeff() : 0.0;
  if (loss > reorth_trigger || std::abs(v.norm() - 1.0) > reorth_trigger) {
    auto o = orthonormalize_against(basis(), v);
    if (!o) throw std::invalid_argument("expand: vector lies in the current subspace");
    vn = std::move(o->v);
  }

  const Index m = m_;
  v_.col(m) = vn;
  w_.col(m) = shifted_matvec(a, sigma_, vn);
  for (Index j = 0; j <= m; ++j) h_(m, j) = w_.col(m).dot(v_.col(j));
  for (Index i = 0; i < m; ++i) h_(i, m) = w_.col(i).dot(v_.col(m));
  for (Index i = 0; i < m; ++i) {
    g_(i, m) = w_.col(i).dot(w_.col(m));
    g_(m, i) = std::conj(g_(i, m));
  }
  g_(m, m) = w_.col(m).squaredNorm();
  m_ = m + 1;
}

void SubspaceState::reset(const SparseMatrix& a, const DenseMatrix& basis) {
  if (basis.cols() > capacity()) throw std::length_error("restart basis exceeds capacity");
  m_ = 0;
  for (Index j = 0; j < basis.cols(); ++j) expand(a, basis.col(j));
}

double SubspaceState::orthonormality_error() const {
  return (basis().adjoint() * basis() - DenseMatrix::Identity(m_, m_)).norm();
}

std::string_view to_string(ExtractionKind kind) {
  switch (kind) {
    case ExtractionKind::standard: return "standard";
    case ExtractionKind::harmonic: return "harmonic";
    case ExtractionKind::refined_harmonic: return "refined-harmonic";
  }
  return "?";
}

Extraction extract_standard(const SubspaceState& state, const SparseMatrix& a) {
  if (state.dim() < 1) throw std::invalid_argument("extraction needs a nonempty subspace");
  const DenseMatrix k = state.h().adjoint();  // V^H (A - sigma I) V
  auto pairs = eig_general(k);
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigPair& x, const EigPair& y) {
    const double mx = std::abs(x.value), my = std::abs(y.value);
    if (mx != my) return mx < my;
    return std::arg(x.value) < std::arg(y.value);
  });
  std::vector<Scalar> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) values.push_back(p.value + state.sigma());
  const Scalar nu = pairs.front().value + state.sigma();
  return finish(ExtractionKind::standard, state, a, nu, std::move(pairs.front().vector),
                std::move(values));
}

Extraction extract_harmonic(const SubspaceState& state, const SparseMatrix& a) {
  auto core = harmonic_core(state);
  return finish(ExtractionKind::harmonic, state, a, core.rho, std::move(core.z),
                std::move(core.values));
}

DenseMatrix cross_product_matrix(const SubspaceState& state, Scalar rho) {
  const Index m = state.dim();
  const Scalar d = state.sigma() - rho;
  DenseMatrix s = state.g();
  s += std::conj(d) * state.h().adjoint();
  s += d * state.h();
  s += std::norm(d) * DenseMatrix::Identity(m, m);
  return 0.5 * (s + s.adjoint());
}

Extraction extract_refined_harmonic(const SubspaceState& state, const SparseMatrix& a,
                                    RefinedApproach approach) {
  auto core = harmonic_core(state);
  Vector zhat;
  if (state.dim() == 1) {
    zhat = Vector::Ones(1);
  } else if (approach == RefinedApproach::cross_product) {
    zhat = eig_hermitian_smallest(cross_product_matrix(state, core.rho)).vector;
  } else {
    const DenseMatrix shifted =
        state.shifted_basis() + (state.sigma() - core.rho) * state.basis();
    zhat = smallest_singular_triplet_qr(shifted).right_vector;
  }
  const Scalar rho_hat = rayleigh_from_h(state, zhat);
  return finish(ExtractionKind::refined_harmonic, state, a, rho_hat, std::move(zhat),
                std::move(core.values));
}

Extraction extract(ExtractionKind kind, const SubspaceState& state, const SparseMatrix& a,
                   RefinedApproach approach) {
  switch (kind) {
    case ExtractionKind::standard: return extract_standard(state, a);
    case ExtractionKind::harmonic: return extract_harmonic(state, a);
    case ExtractionKind::refined_harmonic: return extract_refined_harmonic(state, a, approach);
  }
  throw std::invalid_argument("unknown extraction kind");
}

}  // namespace ieig
