#pragma once

#include "homog/blockops.hpp"
#include "homog/linalg.hpp"
#include "homog/series.hpp"

namespace homog {

/// Truncated matrix acting on the weighted space with parameter lambda,
/// orthonormal basis. Columns of degree <= interior are trustworthy; the
/// rest feel the truncation.
struct RepMatrix {
  Mtx m;
  double lambda = 1.0;
  MobiusMap map;
  int interior = 0;
};

/// Matrix of the composition operator g -> c(f,.)^lambda (g o f) on the
/// orthonormal basis of the space with parameter lambda: column k holds the
/// coefficients of series_compose_pow(f, lambda, k, N), Gram-rescaled.
/// For the group element f this is the discrete series evaluated at f^{-1}.
inline RepMatrix discrete_series_matrix(double lambda, const MobiusMap& f, int N,
                                        int interior = -1) {
  RepMatrix rep;
  rep.lambda = lambda;
  rep.map = f;
  rep.interior = interior < 0 ? N / 3 : interior;
  rep.m = Mtx::Zero(N + 1, N + 1);
  std::vector<double> lg(std::size_t(N) + 1);
  for (int d = 0; d <= N; ++d) lg[std::size_t(d)] = log_gram_entry(lambda, 1.0, d);
  auto cols = composition_power_columns(f, lambda, N);
  for (int k = 0; k <= N; ++k)
    for (int r = 0; r <= N; ++r)
      rep.m(r, k) = cols[std::size_t(k)][r] *
                    std::exp(0.5 * (lg[std::size_t(r)] - lg[std::size_t(k)]));
  return rep;
}

/// The discrete series itself: group element f acts by composition with
/// f^{-1}, so this is the projective-law-satisfying family.
inline RepMatrix discrete_series_rep(double lambda, const MobiusMap& f, int N,
                                     int interior = -1) {
  RepMatrix rep = discrete_series_matrix(lambda, invert(f), N, interior);
  rep.map = f;
  return rep;
}

/// The anti-holomorphic Hardy-space series: m0(f, f^{-1}) times the
/// holomorphic one at f-star.
inline RepMatrix d1_minus_matrix(const MobiusMap& f, int N, int interior = -1) {
  RepMatrix rep = discrete_series_matrix(1.0, star(f), N, interior);
  rep.m *= multiplier_m0_diag(f);
  rep.map = f;
  return rep;
}

inline RepMatrix d1_minus_rep(const MobiusMap& f, int N, int interior = -1) {
  RepMatrix rep = discrete_series_rep(1.0, star(f), N, interior);
  rep.m *= multiplier_m0_diag(f);
  rep.map = f;
  return rep;
}

/// Block-diagonal sum of discrete series over the blocks of sp, with the
/// per-block parameter shifted by `shift` (so shift = +1 realizes the
/// lambda+1 scale, -1 the lambda-1 scale).
inline Mtx block_discrete_series_rep(const SpaceDescD& sp, int shift, const MobiusMap& f) {
  Mtx m = Mtx::Zero(sp.dim(), sp.dim());
  for (int i = 0; i < sp.n; ++i) {
    RepMatrix r = discrete_series_rep(sp.block_lambda(i) + double(shift), f, sp.N);
    m.block(i * (sp.N + 1), i * (sp.N + 1), sp.N + 1, sp.N + 1) = r.m;
  }
  return m;
}

/// Composition operators smear degree k over a band reaching roughly
/// k (1+|alpha|) / (1-|alpha|); identity checks therefore evaluate all
/// analytic objects on a padded truncation and compare them on the stated
/// interior window only.
inline int working_truncation(int N, int interior) {
  return std::max(N, 4 * interior + 48);
}

struct ProjectiveLawResult {
  cplx multiplier{1.0, 0.0};
  double residual = 0.0;
};

/// Finds the unimodular scalar minimizing || R(fg) - m R(f) R(g) || on the
/// interior columns and rows; R is the discrete series of weight lambda.
/// For lambda = 1 the extracted multiplier must be m0(f, g).
inline ProjectiveLawResult check_projective_law(double lambda, const MobiusMap& f,
                                                const MobiusMap& g, int N, int interior) {
  int W = working_truncation(N, interior);
  Mtx P = discrete_series_rep(lambda, compose(f, g), W).m;
  Mtx Q = discrete_series_rep(lambda, f, W).m * discrete_series_rep(lambda, g, W).m;
  int k = interior + 1;
  Mtx Pi = P.topLeftCorner(k, k), Qi = Q.topLeftCorner(k, k);
  // seed with the dominant (0,0) ratio, then a least-squares unimodular fit
  cplx m = Pi(0, 0) / Qi(0, 0);
  cplx overlap = (Qi.conjugate().cwiseProduct(Pi)).sum();
  if (std::abs(overlap) > 0.0) m = overlap / std::abs(overlap);
  ProjectiveLawResult res;
  res.multiplier = m;
  res.residual = max_abs(Pi - m * Qi);
  return res;
}

/// c(f, T) and f(T) for a contraction matrix T.
struct OperatorMobius {
  Mtx c_of_t;
  Mtx phi_of_t;
};

inline OperatorMobius mobius_of_operator(const MobiusMap& f, const Mtx& t) {
  Mtx id = Mtx::Identity(t.rows(), t.cols());
  Mtx den = id - std::conj(f.alpha) * t;
  Eigen::PartialPivLU<Mtx> lu(den);
  OperatorMobius out;
  out.c_of_t = sqrt_branch(f.beta) * std::sqrt(1.0 - std::norm(f.alpha)) * lu.solve(id);
  out.phi_of_t = f.beta * lu.solve(t - f.alpha * id).eval();
  // (I - conj(a) T) and (T - a I) commute, so the order of solve is free.
  return out;
}

/// c(f, A)^{-1} = (I - conj(alpha) A) / (s(beta) sqrt(1-|alpha|^2)); no
/// linear solve is involved.
inline Mtx cocycle_inverse(const MobiusMap& f, const Mtx& a) {
  Mtx id = Mtx::Identity(a.rows(), a.cols());
  return (id - std::conj(f.alpha) * a) /
         (sqrt_branch(f.beta) * std::sqrt(1.0 - std::norm(f.alpha)));
}

enum class CompanionSide { Right, Left };

/// Companion-representation identity in the inclusion coordinates:
///  right:  Sigma'(f) B+  =  m0(f,f^{-1}) B+ Sigma(f) c(f,A)^{-1}
///  left:   Sigma''(f) (B-)* = m0(f,f^{-1}) (B-)* Sigma(f) (c(f,A)*)^{-1}
/// with Sigma the block sum of the series at the base scale and
/// Sigma', Sigma'' its shifts by +-1. Returns the max-entry residual on
/// interior columns.
inline double companion_check(double lambda, const std::vector<double>& mu,
                              const MobiusMap& f, int N, int interior, CompanionSide side,
                              int work = -1) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("companion_check: non-generic parameters");
  const int W = work > 0 ? work : working_truncation(N, interior);
  BlockOpD Aop = build_A(lambda, mu, W);
  Mtx A = to_orthonormal(Aop);
  Mtx Sigma = block_discrete_series_rep(Aop.dom, 0, f);
  cplx m0 = multiplier_m0_diag(f);
  Mtx lhs, rhs;
  if (side == CompanionSide::Right) {
    Mtx Bp = to_orthonormal(build_Bplus(lambda, mu, dp.mu_prime(), W));
    lhs = block_discrete_series_rep(Aop.dom, +1, f) * Bp;
    rhs = m0 * Bp * Sigma * cocycle_inverse(f, A);
  } else {
    Mtx Bm = to_orthonormal(build_Bplus(lambda - 1.0, dp.mu_doubleprime, mu, W));
    lhs = block_discrete_series_rep(Aop.dom, -1, f) * Bm.adjoint();
    rhs = m0 * Bm.adjoint() * Sigma * cocycle_inverse(f, A).adjoint();
  }
  const int n = Aop.dom.n;
  return max_abs(interior_submatrix(lhs - rhs, n, W, n, W, interior));
}

}  // namespace homog
