#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ieig/governor.hpp"

using namespace ieig;

TEST_SUITE("governor") {

TEST_CASE("C' examples") {
  const std::vector<Scalar> two{0.9, 2.0};
  CHECK(compute_c_prime(1.0, 0.0, two, 1).value == 1.0);
  CHECK(compute_c_prime(1.0, 0.0, two, 2).value == doctest::Approx(4.0));
  const std::vector<Scalar> three{0.9, 2.0, -1.0};
  CHECK(compute_c_prime(1.0, 0.0, three, 3).value == doctest::Approx(4.0));
  // Only the first m values take part.
  const std::vector<Scalar> far{0.9, 2.0, 1.0 + 1e-3};
  CHECK(compute_c_prime(1.0, 0.0, far, 2).value == doctest::Approx(4.0));
}

TEST_CASE("degenerate terms are skipped and flagged") {
  const std::vector<Scalar> v{0.9, 1.0, 2.0};
  const auto c = compute_c_prime(1.0, 0.0, v, 3);
  CHECK(c.degenerate);
  CHECK(c.value == doctest::Approx(4.0));

  const std::vector<Scalar> all{0.9, 1.0};
  const auto d = compute_c_prime(1.0, 0.0, all, 2);
  CHECK(d.degenerate);
  CHECK(std::isinf(d.value));
}

TEST_CASE("inner tolerance rule") {
  auto g = ToleranceGovernor::adaptive(1e-3);
  CHECK(g.inner_tolerance(200.0) == 0.1);
  CHECK(g.last_capped());
  auto h = ToleranceGovernor::adaptive(1e-4);
  CHECK(h.inner_tolerance(1.0) == 1e-4);
  CHECK_FALSE(h.last_capped());
  CHECK(h.inner_tolerance(std::numeric_limits<double>::infinity()) == 0.1);

  auto e = ToleranceGovernor::exact();
  for (double c : {1.0, 10.0, 1e9}) CHECK(e.inner_tolerance(c) == 1e-14);
  CHECK_FALSE(e.p_01());

  auto f = ToleranceGovernor::fixed(1e-2);
  CHECK(f.inner_tolerance(1e5) == 1e-2);
  CHECK_FALSE(f.p_01());

  CHECK_THROWS_AS(ToleranceGovernor::adaptive(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceGovernor::adaptive(1.0), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceGovernor::fixed(0.0), std::invalid_argument);
}

TEST_CASE("rule holds literally and P_0.1 matches the event log") {
  std::mt19937_64 rng(51);
  std::lognormal_distribution<double> c_dist(2.0, 2.0);
  for (double eps_tilde : {1e-3, 1e-4, 0.05}) {
    auto g = ToleranceGovernor::adaptive(eps_tilde);
    long capped = 0, total = 0;
    for (int k = 0; k < 500; ++k) {
      const double c = 1.0 + c_dist(rng);
      const double eps = g.inner_tolerance(c);
      CHECK(eps == std::min(c * eps_tilde, 0.1));
      CHECK(eps <= 0.1);
      CHECK(eps >= eps_tilde);
      ++total;
      if (g.last_capped()) ++capped;
      CHECK(g.last_capped() == (c * eps_tilde >= 0.1));
    }
    CHECK(g.count_total() == total);
    CHECK(*g.p_01() == static_cast<double>(capped) / static_cast<double>(total));
  }
}

}  // TEST_SUITE
