#include <doctest.h>

#include "ieig/precond.hpp"
#include "support/oracles.hpp"

using namespace ieig;

namespace {

DenseMatrix shifted_dense(const SparseMatrix& a, Scalar sigma) {
  return oracle::dense_of(a) - sigma * DenseMatrix::Identity(a.size(), a.size());
}

}  // namespace

TEST_SUITE("precond") {

TEST_CASE("no dropping on a dense 5x5 gives the exact LU") {
  std::mt19937_64 rng(21);
  std::vector<Triplet> t;
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) t.push_back({i, j, oracle::random_scalar(rng) + (i == j ? 6.0 : 0.0)});
  const auto a = SparseMatrix::from_triplets(5, t);
  const Scalar sigma(0.3, 0.2);
  IlutOptions opt;
  opt.drop_tol = 0.0;
  const auto f = ilut_factorize(a, sigma, opt);
  const DenseMatrix s = shifted_dense(a, sigma);
  CHECK((f.lower_dense() * f.upper_dense() - s).norm() <= 1e-13 * s.norm());
  CHECK(f.lower_dense().diagonal().isOnes());
}

TEST_CASE("diagonal matrix factors into identity and the diagonal") {
  const auto a = SparseMatrix::from_triplets(3, {{0, 0, 2.0}, {1, 1, -1.0}, {2, 2, 5.0}});
  for (double drop : {0.0, 1e-3, 0.5}) {
    IlutOptions opt;
    opt.drop_tol = drop;
    const auto f = ilut_factorize(a, 1.0, opt);
    CHECK(f.lower_dense().isIdentity());
    DenseMatrix u = DenseMatrix::Zero(3, 3);
    u(0, 0) = 1.0;
    u(1, 1) = -2.0;
    u(2, 2) = 4.0;
    CHECK((f.upper_dense() - u).norm() == 0.0);
  }
}

TEST_CASE("identity factors leave the right-hand side unchanged") {
  std::mt19937_64 rng(22);
  const auto f = ilut_factorize(SparseMatrix::identity(10), 0.0, {});
  const Vector b = oracle::random_vector(rng, 10);
  CHECK((f.apply_inverse(b) - b).norm() == 0.0);
}

TEST_CASE("exact factors invert random sparse matrices") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 30 + 20 * trial;
    const auto a = oracle::random_sparse(rng, n, 4, trial % 2 == 0, 8.0);
    const Scalar sigma(0.5, trial % 2 == 0 ? 0.0 : 0.5);
    IlutOptions opt;
    opt.drop_tol = 0.0;
    const auto f = ilut_factorize(a, sigma, opt);
    const Vector b = oracle::random_vector(rng, n);
    const Vector x = f.apply_inverse(b);
    CHECK((shifted_matvec(a, sigma, x) - b).norm() <= 1e-12 * b.norm());
  }
}

TEST_CASE("threshold preconditioner reduces the residual") {
  std::mt19937_64 rng(24);
  const auto a = oracle::random_sparse(rng, 150, 5, true, 6.0);
  const Scalar sigma(0.2, -0.3);
  const auto f = ilut_factorize(a, sigma, {});
  const Vector b = oracle::random_vector(rng, 150);
  const double with = (shifted_matvec(a, sigma, f.apply_inverse(b)) - b).norm();
  const double without = (shifted_matvec(a, sigma, b) - b).norm();
  CHECK(with < without);
}

TEST_CASE("kept entries respect the drop threshold") {
  std::mt19937_64 rng(25);
  const auto a = oracle::random_sparse(rng, 120, 6, true, 3.0);
  const Scalar sigma(0.1, 0.1);
  IlutOptions opt;
  opt.drop_tol = 0.05;
  const auto f = ilut_factorize(a, sigma, opt);
  const DenseMatrix s = shifted_dense(a, sigma);
  const DenseMatrix l = f.lower_dense();
  const DenseMatrix u = f.upper_dense();
  for (Index i = 0; i < a.size(); ++i) {
    const double tau = opt.drop_tol * s.row(i).norm();
    for (Index j = 0; j < a.size(); ++j) {
      if (i == j) {
        CHECK(u(i, i) != Scalar(0.0));
        continue;
      }
      if (l(i, j) != Scalar(0.0)) CHECK(std::abs(l(i, j)) >= tau);
      if (u(i, j) != Scalar(0.0)) CHECK(std::abs(u(i, j)) >= tau);
    }
  }
}

TEST_CASE("per-row fill cap bounds the factor size") {
  std::mt19937_64 rng(26);
  const auto a = oracle::random_sparse(rng, 200, 6, true, 2.0);
  IlutOptions opt;
  opt.drop_tol = 1e-4;
  opt.fill_kind = FillCapKind::original_row;
  const auto f = ilut_factorize(a, 0.0, opt);
  CHECK(f.nnz_lower() + f.nnz_upper() <= a.nnz() + 2 * a.size());

  opt.fill_kind = FillCapKind::absolute;
  opt.fill_cap = 2;
  const auto g = ilut_factorize(a, 0.0, opt);
  CHECK(g.nnz_lower() <= 2 * a.size());
  CHECK(g.nnz_upper() <= 3 * a.size());
}

TEST_CASE("zero pivot is patched or reported") {
  const auto a = SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  IlutOptions opt;
  opt.drop_tol = 1e-2;
  const auto f = ilut_factorize(a, 0.0, opt);
  CHECK(f.patched_pivots() == 1);
  CHECK(std::abs(f.upper_dense()(0, 0) - Scalar(1e-2)) < 1e-15);

  opt.patch_zero_pivots = false;
  try {
    ilut_factorize(a, 0.0, opt);
    FAIL("expected ZeroPivot");
  } catch (const ZeroPivot& e) {
    CHECK(e.row() == 0);
  }

  // Patched pivot inherits the phase of the original diagonal.
  const auto c = SparseMatrix::from_triplets(2, {{0, 0, Scalar(0.0, 1e-300)}, {0, 1, 1.0}, {1, 1, 1.0}});
  opt.patch_zero_pivots = true;
  const auto h = ilut_factorize(c, 0.0, opt);
  CHECK(std::abs(h.upper_dense()(0, 0) - Scalar(0.0, 1e-2)) < 1e-15);
}

TEST_CASE("projected preconditioner") {
  std::mt19937_64 rng(27);
  const Index n = 60;
  Vector y = oracle::random_vector(rng, n);
  y.normalize();
  auto project = [&](const Vector& v) { return Vector(v - y * y.dot(v)); };

  SUBCASE("identity M returns b for b orthogonal to y") {
    const auto f = ilut_factorize(SparseMatrix::identity(n), 0.0, {});
    const JdProjectedPreconditioner p(f, y);
    const Vector b = project(oracle::random_vector(rng, n));
    CHECK((p.apply(b) - b).norm() <= 1e-14 * b.norm());
    CHECK(p.apply(Vector::Zero(n)).norm() == 0.0);
  }

  SUBCASE("solves the projected system within the complement of y") {
    const auto a = oracle::random_sparse(rng, n, 5, true, 6.0);
    IlutOptions opt;
    opt.drop_tol = 0.0;
    const auto f = ilut_factorize(a, 0.0, opt);
    const JdProjectedPreconditioner p(f, y);
    const DenseMatrix m = oracle::dense_of(a);
    for (int k = 0; k < 10; ++k) {
      const Vector b = project(oracle::random_vector(rng, n));
      const Vector t = p.apply(b);
      CHECK(std::abs(y.dot(t)) <= 1e-12 * t.norm());
      const Vector mt = project(m * project(t));
      CHECK((mt - b).norm() <= 1e-10 * b.norm());
    }
  }

  SUBCASE("output is orthogonal to y for a threshold preconditioner") {
    const auto a = oracle::random_sparse(rng, n, 5, true, 4.0);
    const auto f = ilut_factorize(a, Scalar(0.3, 0.1), {});
    const JdProjectedPreconditioner p(f, y);
    for (int k = 0; k < 10; ++k) {
      const Vector t = p.apply(project(oracle::random_vector(rng, n)));
      CHECK(std::abs(y.dot(t)) <= 1e-12 * t.norm());
    }
  }

  SUBCASE("breakdown falls back to the projected plain inverse") {
    // M = diag(1, -1): y = (1, 1)/sqrt(2) gives y^H M^{-1} y = 0.
    const auto m = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, -1.0}});
    const auto f = ilut_factorize(m, 0.0, {});
    Vector y2 = Vector::Ones(2) / std::sqrt(2.0);
    const JdProjectedPreconditioner p(f, y2);
    CHECK(p.breakdown());
    Vector b(2);
    b << 1.0, -1.0;
    CHECK_THROWS_AS(p.apply(b), BreakdownScalar);
    const Vector t = p.apply_with_fallback(b);
    CHECK(std::abs(y2.dot(t)) <= 1e-15);
  }
}

}  // TEST_SUITE
