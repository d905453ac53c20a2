#include <doctest.h>

#include "ieig/dense.hpp"
#include "ieig/extraction.hpp"
#include "ieig/krylov.hpp"
#include "ieig/planted.hpp"
#include "ieig/precond.hpp"
#include "support/oracles.hpp"

using namespace ieig;

TEST_SUITE("krylov") {

TEST_CASE("shift-invert operator") {
  std::mt19937_64 rng(31);
  const auto x = oracle::random_vector(rng, 8);
  CHECK((make_sira_operator(SparseMatrix::identity(8), 0.0)(x) - x).norm() == 0.0);

  const auto a = oracle::random_sparse(rng, 40, 4);
  const Scalar sigma(1.5, -0.5);
  const auto op = make_sira_operator(a, sigma);
  const DenseMatrix s = oracle::dense_of(a) - sigma * DenseMatrix::Identity(40, 40);
  Vector e1 = Vector::Zero(40);
  e1(0) = 1.0;
  CHECK((op(e1) - s.col(0)).norm() == 0.0);
  const Vector v = oracle::random_vector(rng, 40);
  CHECK((op(v) - s * v).norm() <= 1e-14 * (s * v).norm());
}

TEST_CASE("projected correction operator") {
  std::mt19937_64 rng(32);
  const Index n = 40;
  const auto a = oracle::random_sparse(rng, n, 4);
  Vector y = oracle::random_vector(rng, n);
  y.normalize();
  const Scalar sigma(0.3, 0.7);
  const auto op = make_jd_operator(a, sigma, y);

  CHECK(op(y).norm() <= 1e-13 * oracle::spectral_norm(oracle::dense_of(a)));

  const DenseMatrix p = DenseMatrix::Identity(n, n) - y * y.adjoint();
  const DenseMatrix dense = p * (oracle::dense_of(a) - sigma * DenseMatrix::Identity(n, n)) * p;
  for (int k = 0; k < 5; ++k) {
    const Vector v = oracle::random_vector(rng, n);
    const Vector out = op(v);
    CHECK(std::abs(y.dot(out)) <= 1e-13 * out.norm());
    CHECK((out - dense * v).norm() <= 1e-13 * (dense * v).norm());
  }
}

TEST_CASE("GMRES on the identity takes one step") {
  std::mt19937_64 rng(33);
  const Vector b = oracle::random_vector(rng, 20);
  const IdentityOperator id(20);
  const auto out = gmres_right_preconditioned(id, id, b, {1e-12, 30, 1000});
  CHECK(out.converged);
  CHECK(out.iterations == 1);
  CHECK((out.solution - b).norm() <= 1e-14 * b.norm());
}

TEST_CASE("GMRES with an exact preconditioner takes one step") {
  std::mt19937_64 rng(34);
  const DenseMatrix m = oracle::random_dense(rng, 50, 50) + 10.0 * DenseMatrix::Identity(50, 50);
  const oracle::DenseOperator op(m);
  const oracle::DenseSolveOperator inv(m);
  const Vector b = oracle::random_vector(rng, 50);
  const auto out = gmres_right_preconditioned(op, inv, b, {1e-14, 30, 1000});
  CHECK(out.iterations == 1);
  CHECK((b - m * out.solution).norm() <= 1e-14 * b.norm() * 10);
}

TEST_CASE("GMRES matches a direct dense solve") {
  std::mt19937_64 rng(35);
  const Index n = 100;
  const DenseMatrix m = oracle::random_dense(rng, n, n) / std::sqrt(double(n)) +
                        3.0 * DenseMatrix::Identity(n, n);
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  const oracle::DenseOperator op(m);
  const IdentityOperator id(n);
  const Vector b = oracle::random_vector(rng, n);
  const auto out = gmres_right_preconditioned(op, id, b, {1e-10, 30, 1000});
  REQUIRE(out.converged);
  const double rel = (b - m * out.solution).norm() / b.norm();
  CHECK(rel <= 1e-10);
  CHECK(out.achieved_rel_residual == doctest::Approx(rel).epsilon(1e-6));
  CHECK(std::abs(out.achieved_rel_residual - rel) <= 1e-13);
  const Vector xs = m.partialPivLu().solve(b);
  CHECK((out.solution - xs).norm() / xs.norm() <= 1e-8 * cond);
}

TEST_CASE("zero right-hand side returns zero without iterating") {
  const IdentityOperator id(5);
  const auto out = gmres_right_preconditioned(id, id, Vector::Zero(5), {});
  CHECK(out.iterations == 0);
  CHECK(out.converged);
  CHECK(out.solution.norm() == 0.0);
}

TEST_CASE("restart residuals never increase and the cap is honored") {
  std::mt19937_64 rng(36);
  const Index n = 200;
  const auto a = oracle::random_sparse(rng, n, 6, true, 0.0);
  const auto op = make_sira_operator(a, Scalar(0.1, 0.1));
  const IdentityOperator id(n);
  const Vector b = oracle::random_vector(rng, n);
  const auto out = gmres_right_preconditioned(op, id, b, {1e-14, 10, 120});
  CHECK(out.iterations <= 120);
  CHECK_FALSE(out.converged);
  REQUIRE(out.cycle_residuals.size() >= 2);
  for (std::size_t k = 1; k < out.cycle_residuals.size(); ++k) {
    CHECK(out.cycle_residuals[k] <= out.cycle_residuals[k - 1] + 1e-13);
  }
  const double rel = (b - op(out.solution)).norm() / b.norm();
  CHECK(std::abs(out.achieved_rel_residual - rel) <= 1e-13);
}

TEST_CASE("correction-equation solutions stay orthogonal to y") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    PlantedOptions po;
    po.seed = seed;
    po.complex = seed % 2 == 0;
    po.n = 120;
    const auto p = make_planted_problem(po);
    const Index n = p.matrix.size();
    std::mt19937_64 rng(seed);

    SubspaceState state(n, p.sigma, 6);
    state.reset(p.matrix, Vector::Ones(n) / std::sqrt(double(n)));
    for (int k = 0; k < 3; ++k) {
      auto o = orthonormalize_against(state.basis(), oracle::random_vector(rng, n));
      state.expand(p.matrix, o->v);
    }
    const auto ext = extract_harmonic(state, p.matrix);
    IlutOptions io;
    io.drop_tol = 0.2;
    const auto f = ilut_factorize(p.matrix, p.sigma, io);
    const JdProjectedPreconditioner pp(f, ext.y);
    const JdPreconditionerOperator prec(pp, n);
    const auto op = make_jd_operator(p.matrix, p.sigma, ext.y);
    const Vector rhs = -(ext.residual - ext.y * ext.y.dot(ext.residual));
    for (double eps : {1e-1, 1e-3, 1e-8}) {
      const auto out = gmres_right_preconditioned(op, prec, rhs, {eps, 30, 1000});
      CHECK(std::abs(ext.y.dot(out.solution)) <= 1e-10 * out.solution.norm());
      CHECK(out.achieved_rel_residual <= eps);
    }
  }
}

}  // TEST_SUITE
