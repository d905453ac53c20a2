#pragma once

#include <optional>
#include <span>

#include "ieig/types.hpp"

namespace ieig {

struct CPrime {
  double value = 1.0;
  bool degenerate = false;  // some |nu_i - rho| was at rounding level and was skipped
};

/// Computable surrogate for the inner-accuracy constant:
///   m = 1:  1
///   m > 1:  2 max_{i=2..m} |nu_i - sigma| / |nu_i - rho|
/// `values` holds nu_1, nu_2, ... sorted by distance to sigma; only the first
/// min(m, values.size()) are used. If every term is degenerate the result is +inf.
CPrime compute_c_prime(Scalar rho, Scalar sigma, std::span<const Scalar> values, Index m);

enum class ToleranceMode { adaptive, exact, fixed };

/// Turns the target accuracy eps~ into a GMRES tolerance eps = min(C' eps~, 0.1)
/// and keeps the tally behind P_0.1.
class ToleranceGovernor {
 public:
  static constexpr double cap = 0.1;
  static constexpr double exact_tolerance = 1e-14;

  static ToleranceGovernor adaptive(double eps_tilde);
  static ToleranceGovernor exact();
  static ToleranceGovernor fixed(double eps);

  ToleranceMode mode() const { return mode_; }
  double eps_tilde() const { return value_; }

  /// Tolerance for the next inner solve; records the event.
  double inner_tolerance(double c_prime);

  long count_total() const { return total_; }
  long count_capped() const { return capped_; }
  /// Fraction of inner solves that ran at the 0.1 cap; empty outside adaptive mode.
  std::optional<double> p_01() const;
  bool last_capped() const { return last_capped_; }

 private:
  ToleranceGovernor(ToleranceMode mode, double value) : mode_(mode), value_(value) {}

  ToleranceMode mode_;
  double value_;
  long total_ = 0;
  long capped_ = 0;
  bool last_capped_ = false;
};

}  // namespace ieig
