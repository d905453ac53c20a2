#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ieig/extraction.hpp"
#include "ieig/governor.hpp"
#include "ieig/precond.hpp"
#include "ieig/sparse_matrix.hpp"

namespace ieig {

enum class Expansion { sira, jd };

/// One of the six methods: {SIRA, JD} x {standard, harmonic, refined harmonic}.
struct MethodSpec {
  Expansion expansion = Expansion::sira;
  ExtractionKind extraction = ExtractionKind::refined_harmonic;

  /// "sira", "jd", "hsira", "hjd", "rhsira", "rhjd"
  std::string name() const;
  static std::optional<MethodSpec> parse(std::string_view name);

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// In table order: SIRA, HSIRA, RHSIRA, JD, HJD, RHJD.
std::array<MethodSpec, 6> all_methods();

struct SolveConfig {
  Scalar sigma = 0.0;
  int m_max = 30;
  int max_restarts = 500;
  double tol_factor = 1e-12;
  ToleranceMode mode = ToleranceMode::adaptive;
  double eps_tilde = 1e-3;  // adaptive mode
  double fixed_eps = 1e-2;  // fixed mode
  IlutOptions ilu{};
  int gmres_restart = 30;
  int gmres_cap = 1000;
  RefinedApproach approach = RefinedApproach::cross_product;
};

/// One extraction. Records with `solved` set also carry the inner solve it triggered.
struct OuterRecord {
  int cycle = 0;
  int m = 0;
  Scalar rho;
  double residual_norm = 0.0;
  bool solved = false;
  double eps_used = 0.0;
  double c_prime = 1.0;
  bool c_prime_degenerate = false;
  int inner_iters = 0;
  bool capped = false;
  double inner_rel_residual = 0.0;
  bool inner_converged = false;
};

enum class FailureReason {
  none,
  max_restarts,
  not_positive_definite,
  repeated_deflation,
  ilut_breakdown,
  dense_failure,
};

std::string_view to_string(FailureReason reason);

struct SolveReport {
  bool converged = false;
  Scalar eigenvalue;    // best pair seen when not converged
  Vector eigenvector;
  double residual_norm = 0.0;
  double tol = 0.0;
  int i_restart = 0;
  int i_outer = 0;      // extractions that triggered an inner solve
  long i_inner = 0;     // GMRES steps summed over all inner solves
  std::optional<double> p_01;
  std::vector<OuterRecord> history;
  FailureReason failure = FailureReason::none;
  std::string failure_detail;
  int deflations = 0;
  int patched_pivots = 0;
};

/// Restart basis from the last approximate eigenvector. With `split_real_imag`
/// (real matrix and real target) a genuinely complex y yields the orthonormalized
/// real and imaginary parts; otherwise the single column y.
DenseMatrix restart_basis(const Vector& y, bool split_real_imag);

/// ||r|| < tol, strictly.
bool convergence_check(double residual_norm, double tol);
bool convergence_check(const Vector& r, double tol);

/// Restarted outer iteration for one method.
SolveReport solve(const SparseMatrix& a, const MethodSpec& method, const SolveConfig& config);

}  // namespace ieig
