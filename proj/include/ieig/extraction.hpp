#pragma once

#include <string_view>
#include <vector>

#include "ieig/sparse_matrix.hpp"

namespace ieig {

/// Orthonormal basis V with the cached products W = (A - sigma I) V,
/// H = V^H (A - sigma I)^H V = W^H V and G = W^H W, updated one column at a time.
class SubspaceState {
 public:
  SubspaceState(Index n, Scalar sigma, Index capacity);

  Index n() const { return v_.rows(); }
  Index dim() const { return m_; }
  Index capacity() const { return v_.cols(); }
  Scalar sigma() const { return sigma_; }

  auto basis() const { return v_.leftCols(m_); }
  auto shifted_basis() const { return w_.leftCols(m_); }
  auto h() const { return h_.topLeftCorner(m_, m_); }
  auto g() const { return g_.topLeftCorner(m_, m_); }

  /// Appends a unit vector orthogonal to the current basis. It is
  /// reorthogonalized first if its loss of orthogonality exceeds 1e-8.
  /// Throws std::length_error when the state is full.
  void expand(const SparseMatrix& a, const Vector& v);

  /// Replaces the basis by the orthonormal columns of `basis`.
  void reset(const SparseMatrix& a, const DenseMatrix& basis);

  /// ||V^H V - I||_F, O(n m^2).
  double orthonormality_error() const;

 private:
  Scalar sigma_;
  Index m_ = 0;
  DenseMatrix v_, w_, h_, g_;
};

enum class ExtractionKind { standard, harmonic, refined_harmonic };
/// Refined vector from the cross-product matrix S (I) or from a QR + SVD of (A - rho I) V (II).
enum class RefinedApproach { cross_product, qr_svd };

std::string_view to_string(ExtractionKind kind);

struct Extraction {
  ExtractionKind kind = ExtractionKind::standard;
  Scalar rho;          // Rayleigh quotient of y, the eigenvalue estimate
  Vector y;            // unit vector in span(V)
  Vector coeffs;       // y = V coeffs
  Vector residual;     // A y - rho y, from a fresh product with A
  double residual_norm = 0.0;
  /// Ritz (standard) or harmonic Ritz values nu_i sorted by |nu_i - sigma|.
  std::vector<Scalar> values;
};

Extraction extract_standard(const SubspaceState& state, const SparseMatrix& a);
Extraction extract_harmonic(const SubspaceState& state, const SparseMatrix& a);
Extraction extract_refined_harmonic(const SubspaceState& state, const SparseMatrix& a,
                                    RefinedApproach approach = RefinedApproach::cross_product);
Extraction extract(ExtractionKind kind, const SubspaceState& state, const SparseMatrix& a,
                   RefinedApproach approach = RefinedApproach::cross_product);

/// S = G + conj(sigma - rho) H^H + (sigma - rho) H + |sigma - rho|^2 I.
DenseMatrix cross_product_matrix(const SubspaceState& state, Scalar rho);

}  // namespace ieig
