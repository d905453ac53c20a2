#include "ieig/governor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ieig {

CPrime compute_c_prime(Scalar rho, Scalar sigma, std::span<const Scalar> values, Index m) {
  CPrime c;
  if (m <= 1) return c;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(m), values.size());
  const double floor = machine_eps * (1.0 + std::abs(rho));
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 1; i < count; ++i) {
    const double denom = std::abs(values[i] - rho);
    if (denom < floor) {
      c.degenerate = true;
      continue;
    }
    best = std::max(best, std::abs(values[i] - sigma) / denom);
    any = true;
  }
  if (any) c.value = 2.0 * best;
  else if (c.degenerate) c.value = std::numeric_limits<double>::infinity();
  return c;
}

ToleranceGovernor ToleranceGovernor::adaptive(double eps_tilde) {
  if (!(eps_tilde > 0.0 && eps_tilde < 1.0)) {
    throw std::invalid_argument("eps~ must lie in (0, 1)");
  }
  return {ToleranceMode::adaptive, eps_tilde};
}

ToleranceGovernor ToleranceGovernor::exact() { return {ToleranceMode::exact, exact_tolerance}; }

ToleranceGovernor ToleranceGovernor::fixed(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("fixed eps must lie in (0, 1]");
  return {ToleranceMode::fixed, eps};
}

double ToleranceGovernor::inner_tolerance(double c_prime) {
  ++total_;
  last_capped_ = false;
  if (mode_ != ToleranceMode::adaptive) return value_;
  const double scaled = c_prime * value_;
  if (scaled >= cap || std::isnan(scaled)) {
    ++capped_;
    last_capped_ = true;
    return cap;
  }
  return scaled;
}

std::optional<double> ToleranceGovernor::p_01() const {
  if (mode_ != ToleranceMode::adaptive) return std::nullopt;
  if (total_ == 0) return 0.0;
  return static_cast<double>(capped_) / static_cast<double>(total_);
}

}  // namespace ieig
