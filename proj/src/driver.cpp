#include "ieig/driver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ieig/dense.hpp"
#include "ieig/krylov.hpp"

namespace ieig {

namespace {

constexpr double imag_negligible = 1e-13;
constexpr int max_consecutive_deflations = 3;

ToleranceGovernor make_governor(const SolveConfig& cfg) {
  switch (cfg.mode) {
    case ToleranceMode::adaptive: return ToleranceGovernor::adaptive(cfg.eps_tilde);
    case ToleranceMode::exact: return ToleranceGovernor::exact();
    case ToleranceMode::fixed: return ToleranceGovernor::fixed(cfg.fixed_eps);
  }
  throw std::invalid_argument("unknown tolerance mode");
}

}  // namespace

std::string MethodSpec::name() const {
  std::string prefix;
  if (extraction == ExtractionKind::harmonic) prefix = "h";
  if (extraction == ExtractionKind::refined_harmonic) prefix = "rh";
  return prefix + (expansion == Expansion::sira ? "sira" : "jd");
}

std::optional<MethodSpec> MethodSpec::parse(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& m : all_methods()) {
    if (m.name() == s) return m;
  }
  return std::nullopt;
}

std::array<MethodSpec, 6> all_methods() {
  using E = ExtractionKind;
  return {{{Expansion::sira, E::standard},
           {Expansion::sira, E::harmonic},
           {Expansion::sira, E::refined_harmonic},
           {Expansion::jd, E::standard},
           {Expansion::jd, E::harmonic},
           {Expansion::jd, E::refined_harmonic}}};
}

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::max_restarts: return "max-restarts";
    case FailureReason::not_positive_definite: return "not-positive-definite";
    case FailureReason::repeated_deflation: return "repeated-deflation";
    case FailureReason::ilut_breakdown: return "ilut-breakdown";
    case FailureReason::dense_failure: return "dense-failure";
  }
  return "?";
}

DenseMatrix restart_basis(const Vector& y, bool split_real_imag) {
  const double ynorm = y.norm();
  if (ynorm == 0.0) throw std::invalid_argument("restart_basis: zero vector");
  Vector v = y / ynorm;
  if (!split_real_imag) return v;

  normalize_phase(v);
  const Vector re = v.real().cast<Scalar>();
  const Vector im = v.imag().cast<Scalar>();
  const double re_norm = re.norm(), im_norm = im.norm();
  if (im_norm <= imag_negligible) return re / re_norm;
  if (re_norm <= imag_negligible) return im / im_norm;

  const Vector q1 = re / re_norm;
  const auto q2 = orthonormalize_against(q1, im / im_norm);
  if (!q2) return q1;
  DenseMatrix basis(y.size(), 2);
  basis.col(0) = q1;
  basis.col(1) = q2->v;
  return basis;
}

bool convergence_check(double residual_norm, double tol) { return residual_norm < tol; }

bool convergence_check(const Vector& r, double tol) { return convergence_check(r.norm(), tol); }

SolveReport solve(const SparseMatrix& a, const MethodSpec& method, const SolveConfig& cfg) {
  if (cfg.m_max < 2) throw std::invalid_argument("m_max must be at least 2");
  if (cfg.max_restarts < 1) throw std::invalid_argument("max_restarts must be at least 1");
  const Index n = a.size();
  if (n < 1) throw std::invalid_argument("empty matrix");

  SolveReport rep;
  rep.tol = std::max(one_norm(a), 1.0) * cfg.tol_factor;
  auto governor = make_governor(cfg);

  IlutFactors factors;
  try {
    factors = ilut_factorize(a, cfg.sigma, cfg.ilu);
  } catch (const ZeroPivot& e) {
    rep.failure = FailureReason::ilut_breakdown;
    rep.failure_detail = e.what();
    return rep;
  }
  rep.patched_pivots = factors.patched_pivots();
  const IlutOperator precond(factors);
  const SiraOperator sira_op(a, cfg.sigma);
  const GmresOptions gmres_base{0.0, cfg.gmres_restart, cfg.gmres_cap};

  const bool split = a.is_real() && cfg.sigma.imag() == 0.0;
  SubspaceState state(n, cfg.sigma, cfg.m_max);
  state.reset(a, Vector::Ones(n) / std::sqrt(static_cast<double>(n)));

  int cycle = 0;
  int consecutive_deflations = 0;
  Vector last_y;
  double best_residual = std::numeric_limits<double>::infinity();
  Scalar best_rho;
  Vector best_y;

  auto restart_from = [&](const Vector& y) {
    if (rep.i_restart >= cfg.max_restarts) {
      rep.failure = FailureReason::max_restarts;
      rep.failure_detail = "no convergence within " + std::to_string(cfg.max_restarts) +
                           " restarts";
      return false;
    }
    ++rep.i_restart;
    ++cycle;
    state.reset(a, restart_basis(y, split));
    return true;
  };

  while (true) {
    const int m = static_cast<int>(state.dim());
    Extraction ext;
    try {
      ext = extract(method.extraction, state, a, cfg.approach);
    } catch (const NotPositiveDefinite& e) {
      if (m > 1 && last_y.size() == n) {
        if (!restart_from(last_y)) break;
        continue;
      }
      rep.failure = FailureReason::not_positive_definite;
      rep.failure_detail = e.what();
      break;
    } catch (const DenseError& e) {
      rep.failure = FailureReason::dense_failure;
      rep.failure_detail = e.what();
      break;
    }
    last_y = ext.y;

    OuterRecord rec;
    rec.cycle = cycle;
    rec.m = m;
    rec.rho = ext.rho;
    rec.residual_norm = ext.residual_norm;
    if (ext.residual_norm < best_residual) {
      best_residual = ext.residual_norm;
      best_rho = ext.rho;
      best_y = ext.y;
    }

    if (convergence_check(ext.residual_norm, rep.tol)) {
      rep.history.push_back(rec);
      rep.converged = true;
      break;
    }
    if (m >= cfg.m_max) {
      rep.history.push_back(rec);
      if (!restart_from(ext.y)) break;
      continue;
    }

    const CPrime cp = compute_c_prime(ext.rho, cfg.sigma, ext.values, m);
    GmresOptions opts = gmres_base;
    opts.tol = governor.inner_tolerance(cp.value);

    GmresOutcome inner;
    if (method.expansion == Expansion::sira) {
      inner = gmres_right_preconditioned(sira_op, precond, ext.residual, opts);
    } else {
      const JdOperator op(a, cfg.sigma, ext.y);
      const JdProjectedPreconditioner pp(factors, ext.y);
      const JdPreconditionerOperator jd_precond(pp, n);
      const Vector rhs = -(ext.residual - ext.y.dot(ext.residual) * ext.y);
      inner = gmres_right_preconditioned(op, jd_precond, rhs, opts);
    }

    rec.solved = true;
    rec.eps_used = opts.tol;
    rec.c_prime = cp.value;
    rec.c_prime_degenerate = cp.degenerate;
    rec.capped = governor.last_capped();
    rec.inner_iters = inner.iterations;
    rec.inner_rel_residual = inner.achieved_rel_residual;
    rec.inner_converged = inner.converged;
    rep.history.push_back(rec);
    ++rep.i_outer;
    rep.i_inner += inner.iterations;

    auto expansion = orthonormalize_against(state.basis(), inner.solution);
    if (!expansion) {
      ++rep.deflations;
      if (++consecutive_deflations >= max_consecutive_deflations) {
        rep.failure = FailureReason::repeated_deflation;
        rep.failure_detail = "expansion vector repeatedly fell inside the subspace";
        break;
      }
      if (!restart_from(ext.y)) break;
      continue;
    }
    consecutive_deflations = 0;
    state.expand(a, expansion->v);
  }

  if (best_y.size() == n) {
    if (rep.converged) {
      rep.eigenvalue = rep.history.back().rho;
      rep.eigenvector = last_y;
      rep.residual_norm = rep.history.back().residual_norm;
    } else {
      rep.eigenvalue = best_rho;
      rep.eigenvector = best_y;
      rep.residual_norm = best_residual;
    }
  }
  rep.p_01 = governor.p_01();
  return rep;
}

}  // namespace ieig
