#pragma once

#include <cstdint>
#include <vector>

#include "ieig/sparse_matrix.hpp"

namespace ieig {

struct PlantedOptions {
  Index n = 100;
  std::uint64_t seed = 1;
  /// Complex matrix and complex target; otherwise a real matrix (with some
  /// complex-conjugate eigenvalue pairs) and a real target near a real eigenvalue.
  bool complex = false;
  int couplings_per_row = 3;
  double coupling_scale = 0.3;
};

/// Sparse nonsymmetric matrix with a known spectrum: a symmetrically permuted
/// block upper-triangular matrix whose diagonal blocks carry the eigenvalues.
struct PlantedProblem {
  SparseMatrix matrix;
  std::vector<Scalar> eigenvalues;
  Scalar sigma;
  Scalar target;  // eigenvalue closest to sigma, well separated from the next
};

PlantedProblem make_planted_problem(const PlantedOptions& options);

}  // namespace ieig
