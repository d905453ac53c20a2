#pragma once

// Small dense kernels for the projected problems (dimension up to a few dozen).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieig/types.hpp"

namespace ieig {

class DenseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public DenseError {
 public:
  NotPositiveDefinite(Index pivot, double value);
  Index pivot() const { return pivot_; }

 private:
  Index pivot_;
};

class NoConvergence : public DenseError {
 public:
  using DenseError::DenseError;
};

struct EigPair {
  Scalar value;
  Vector vector;  // unit 2-norm, largest-magnitude entry real positive
};

struct Orthonormalized {
  Vector v;
  double norm_before;  // norm of u after projection, before normalization
};

/// Modified Gram-Schmidt against the orthonormal columns of `basis`, followed
/// by one reorthogonalization pass. Returns nullopt (deflated) when the
/// projected residual is at most n * eps * ||u||.
std::optional<Orthonormalized> orthonormalize_against(const Eigen::Ref<const DenseMatrix>& basis,
                                                      const Vector& u);

/// Scales v so its largest-magnitude entry is real and positive.
void normalize_phase(Eigen::Ref<Vector> v);

/// Lower factor L with L L^H = G for Hermitian positive definite G.
DenseMatrix cholesky(const DenseMatrix& g);

/// All eigenpairs of a general complex matrix (complex Schur based).
std::vector<EigPair> eig_general(const DenseMatrix& t);

/// Pairs (mu, z) with H z = (1/mu) G z, sorted by |mu| ascending; ties by arg(mu).
/// Reduced through G = L L^H; pairs with an infinite mu are dropped.
std::vector<EigPair> pencil_eig(const DenseMatrix& h, const DenseMatrix& g);

/// Smallest eigenpair of a Hermitian matrix by cyclic Jacobi rotations.
EigPair eig_hermitian_smallest(const DenseMatrix& s);

struct SingularTriplet {
  double sigma_min;
  Vector right_vector;
  bool rank_deficient;  // sigma_min below rows * eps * ||W||
};

/// Smallest singular value and right singular vector of a tall matrix via a
/// thin Gram-Schmidt QR (with refinement) and an SVD of the triangular factor.
SingularTriplet smallest_singular_triplet_qr(const DenseMatrix& w);

}  // namespace ieig
