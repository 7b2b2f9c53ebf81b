#pragma once

#include <fstream>

#include "homog/reps.hpp"

namespace homog {

/// One characteristic-function sample: the matrix of theta(z) (or of the
/// un-normalized theta(z) D, per `form`) in orthonormal coordinates.
struct CharFunSample {
  cplx z;
  Mtx m;
  enum class Form { Direct, ExplicitProduct } form = Form::ExplicitProduct;
};

/// Defect square roots (I - T*T)^{1/2}, (I - TT*)^{1/2} of a contraction.
struct DefectPair {
  Mtx d;
  Mtx dstar;
};

inline DefectPair defect_sqrt(const Mtx& t, double norm_slack = 1e-8) {
  if (spectral_norm(t) > 1.0 + norm_slack)
    throw std::domain_error("defect_sqrt: operator norm exceeds 1");
  Mtx id = Mtx::Identity(t.rows(), t.cols());
  DefectPair p;
  p.d = hermitian_sqrt_psd(id - t.adjoint() * t);
  p.dstar = hermitian_sqrt_psd(id - t * t.adjoint());
  return p;
}

/// The un-normalized characteristic function
///   ThetaHat(z) = D_* (I - z T*)^{-1} (z I - T),
/// whose action on D x evaluates theta(z) (D x); no defect inverses appear.
struct ThetaDirect {
  Mtx t;
  Mtx dstar;

  explicit ThetaDirect(Mtx op) : t(std::move(op)) { dstar = defect_sqrt(t).dstar; }

  Mtx at(cplx z) const {
    Mtx id = Mtx::Identity(t.rows(), t.cols());
    return dstar * (id - z * t.adjoint()).partialPivLu().solve(z * id - t);
  }
};

/// Scalar-case explicit characteristic function:
///   theta_lambda(z) = 1/sqrt(lambda(lambda-1)) R_{lambda-1}(phi_z)^* del^* R_{lambda+1}(phi_z),
/// mapping the lambda+1 scale to the lambda-1 scale.
inline Mtx theta_scalar(double lambda, cplx z, int N) {
  if (!(lambda > 1.0)) throw std::domain_error("theta_scalar: lambda must exceed 1");
  MobiusMap phi = involution_at(z);
  Mtx left = discrete_series_rep(lambda - 1.0, phi, N).m;
  Mtx dstar = to_orthonormal(derivative_block(lambda - 1.0, lambda + 1.0, 1, N)).adjoint();
  Mtx right = discrete_series_rep(lambda + 1.0, phi, N).m;
  return (1.0 / std::sqrt(lambda * (lambda - 1.0))) * left.adjoint() * dstar * right;
}

/// Explicit characteristic function of the weighted multiplication operator,
/// as the sandwich of the middle operator between shifted series sums.
inline CharFunSample theta_generic(double lambda, const std::vector<double>& mu, cplx z,
                                   int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("theta_generic: non-generic parameters");
  BlockOpD C = build_C(lambda, mu, N);
  MobiusMap phi = involution_at(z);
  Mtx left = block_discrete_series_rep(SpaceDescD::unit(lambda - 2.0, int(mu.size()), N), 1,
                                       phi);  // weights lambda+2j-1
  Mtx right = block_discrete_series_rep(SpaceDescD::unit(lambda, int(mu.size()), N), 1,
                                        phi);  // weights lambda+2k+1
  CharFunSample s;
  s.z = z;
  s.form = CharFunSample::Form::ExplicitProduct;
  s.m = left.adjoint() * to_orthonormal(C) * right;
  return s;
}

/// Entrywise form of the same function: block (j,k) is
///   y_jk * theta_{lambda+2j}(z) ... theta_{lambda+2k}(z),
/// the empty product at j = k+1 denoting the identity.
inline Mtx theta_generic_entrywise(double lambda, const std::vector<double>& mu, cplx z,
                                   int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("theta_generic_entrywise: non-generic parameters");
  const int n = int(mu.size());
  const int b = N + 1;
  Mtx out = Mtx::Zero(n * b, n * b);
  for (int k = 0; k < n; ++k) {
    Mtx prod = Mtx::Identity(b, b);
    // walk j = k down to 0, extending the product on the left
    for (int j = k; j >= 0; --j) {
      prod = theta_scalar(lambda + 2.0 * j, z, N) * prod;
      out.block(j * b, k * b, b, b) = middle_y(lambda, mu, j, k) * prod;
    }
    if (k + 1 < n)
      out.block((k + 1) * b, k * b, b, b) =
          middle_y(lambda, mu, k + 1, k) * Mtx::Identity(b, b);
  }
  return out;
}

/// Master product-formula identity, inverse-free:
///   theta^(lambda,mu)(z) B+  =  (B-)* (I - z A*)^{-1} (z I - A),
/// asserted entrywise on the interior window. The analytic factors are
/// evaluated on a padded truncation so the window is free of edge effects.
inline double master_check(double lambda, const std::vector<double>& mu, cplx z, int N,
                           int interior) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("master_check: non-generic parameters");
  const int W = working_truncation(N, interior);
  BlockOpD Aop = build_A(lambda, mu, W);
  Mtx A = to_orthonormal(Aop);
  Mtx Bp = to_orthonormal(build_Bplus(lambda, mu, dp.mu_prime(), W));
  Mtx Bm = to_orthonormal(build_Bplus(lambda - 1.0, dp.mu_doubleprime, mu, W));
  Mtx id = Mtx::Identity(A.rows(), A.cols());
  Mtx lhs = theta_generic(lambda, mu, z, W).m * Bp;
  Mtx rhs = Bm.adjoint() * (id - z * A.adjoint()).partialPivLu().solve(z * id - A);
  const int n = Aop.dom.n;
  return max_abs(interior_submatrix(lhs - rhs, n, W, n, W, interior));
}

/// Discrepancy between the sandwich and entrywise forms of the explicit
/// characteristic function on the interior window.
inline double theta_forms_discrepancy(double lambda, const std::vector<double>& mu, cplx z,
                                      int N, int interior) {
  const int W = working_truncation(N, interior);
  Mtx a = theta_generic(lambda, mu, z, W).m;
  Mtx b = theta_generic_entrywise(lambda, mu, z, W);
  return max_abs(interior_submatrix(a - b, int(mu.size()), W, int(mu.size()), W, interior));
}

/// Default z-grid for product-formula checks.
inline std::vector<cplx> default_z_grid() {
  return {cplx(0.0, 0.0),     cplx(0.3, 0.0),           cplx(0.0, 0.5),
          cplx(-0.4, 0.2),    0.6 * std::polar(1.0, M_PI / 3.0),
          cplx(-0.25, -0.45)};
}

/// Covariance of the characteristic function: the singular values of
/// theta^phi(z) agree with those of theta(phi^{-1}(z)). theta is recovered
/// from ThetaHat through the (well-conditioned, truncated) defect inverse.
inline double check_covariance(const Mtx& t, const MobiusMap& f,
                               const std::vector<cplx>& zgrid) {
  DefectPair p = defect_sqrt(t);
  Mtx t2 = mobius_of_operator(f, t).phi_of_t;
  DefectPair p2 = defect_sqrt(t2);
  ThetaDirect th(t), th2(t2);
  MobiusMap finv = invert(f);
  auto theta_of = [](const ThetaDirect& td, const Mtx& d, cplx z) {
    // theta(z) = ThetaHat(z) D^{-1}; D is PD on the truncation.
    Eigen::SelfAdjointEigenSolver<Mtx> es(d);
    Mtx dinv = es.eigenvectors() *
               es.eigenvalues().cwiseMax(1e-14).cwiseInverse().asDiagonal() *
               es.eigenvectors().adjoint();
    return (td.at(z) * dinv).eval();
  };
  double worst = 0.0;
  for (cplx z : zgrid) {
    auto s1 = singular_values_sorted(theta_of(th2, p2.d, z));
    auto s2 = singular_values_sorted(theta_of(th, p.d, finv(z)));
    for (std::size_t i = 0; i < s1.size(); ++i)
      worst = std::max(worst, std::abs(s1[i] - s2[i]));
  }
  return worst;
}

struct CoincidenceResult {
  Mtx u;  // left unitary, u * theta1(z) ~ theta2(z) * v
  Mtx v;  // right unitary
  double residual = 0.0;
  bool rank_deficient_base = false;
};

/// Aligns two sample families at the base index and reports the worst
/// misfit over the grid. The aligning pair comes from the base SVDs:
/// with theta1 = U1 S1 V1*, theta2 = U2 S2 V2*, every base-exact aligner
/// has the form u = U2 Phi U1*, v = V2 Phi' V1* with phase diagonals; the
/// gauge (Phi, Phi') is fixed by synchronizing phases across the whole
/// grid (a bipartite phase-synchronization solved by a leading eigenvector
/// plus local sweeps). A base sample with vanishing or clustered singular
/// values makes the alignment non-unique and is flagged.
inline CoincidenceResult coincidence_align(const std::vector<CharFunSample>& s1,
                                           const std::vector<CharFunSample>& s2,
                                           std::size_t base) {
  if (s1.size() != s2.size() || s1.empty())
    throw std::invalid_argument("coincidence_align: size mismatch");
  Eigen::JacobiSVD<Mtx> svd1(s1[base].m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<Mtx> svd2(s2[base].m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CoincidenceResult out;
  const auto& sv = svd1.singularValues();
  double top = sv.size() ? std::max(sv.maxCoeff(), 1e-300) : 1.0;
  out.rank_deficient_base = sv.size() == 0 || sv.minCoeff() < 1e-10 * top;
  for (int i = 0; i + 1 < sv.size(); ++i)
    if (sv(i) - sv(i + 1) < 1e-10 * top) out.rank_deficient_base = true;

  const Mtx U1 = svd1.matrixU(), V1 = svd1.matrixV();
  const Mtx U2 = svd2.matrixU(), V2 = svd2.matrixV();
  const int r = int(U1.rows()), c = int(V1.rows());
  // accumulated coupling W_jk = sum_z P_jk conj(Q_jk) with P, Q the grid
  // samples rotated into the base singular frames
  Mtx W = Mtx::Zero(r, c);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    Mtx P = U1.adjoint() * s1[i].m * V1;
    Mtx Q = U2.adjoint() * s2[i].m * V2;
    W += P.cwiseProduct(Q.conjugate());
  }
  // bipartite synchronization: maximize Re sum phi_j W_jk conj(phi'_k)
  Mtx H = Mtx::Zero(r + c, r + c);
  H.topRightCorner(r, c) = W;
  H.bottomLeftCorner(c, r) = W.adjoint();
  Eigen::SelfAdjointEigenSolver<Mtx> es(H);
  Vec lead = es.eigenvectors().col(r + c - 1);
  auto project = [](cplx w) { return std::abs(w) > 1e-300 ? w / std::abs(w) : cplx(1.0); };
  Vec phi(r), phip(c);
  for (int j = 0; j < r; ++j) phi(j) = project(std::conj(lead(j)));
  for (int k = 0; k < c; ++k) phip(k) = project(std::conj(lead(r + k)));
  out.u = U2 * phi.asDiagonal() * U1.adjoint();
  out.v = V2 * phip.asDiagonal() * V1.adjoint();
  // The diagonal gauge cannot see the null-space block of a rectangular or
  // deficient base; refine with alternating two-sided Procrustes over the
  // whole grid (monotone in the total misfit).
  auto total = [&](const Mtx& u, const Mtx& v) {
    double t = 0.0;
    for (std::size_t i = 0; i < s1.size(); ++i)
      t += (u * s1[i].m - s2[i].m * v).squaredNorm();
    return t;
  };
  double scale = 1e-300;
  for (std::size_t i = 0; i < s1.size(); ++i) scale += s1[i].m.squaredNorm();
  double prev = total(out.u, out.v);
  for (int sweep = 0; sweep < 500; ++sweep) {
    Mtx gu = Mtx::Zero(r, r), gv = Mtx::Zero(c, c);
    for (std::size_t i = 0; i < s1.size(); ++i) gu += s2[i].m * out.v * s1[i].m.adjoint();
    out.u = polar_unitary(gu);
    for (std::size_t i = 0; i < s1.size(); ++i) gv += s2[i].m.adjoint() * out.u * s1[i].m;
    out.v = polar_unitary(gv);
    double cur = total(out.u, out.v);
    // run until the misfit bottoms out at the rounding floor or stalls
    if (cur < 1e-28 * scale || prev - cur < 1e-9 * cur) break;
    prev = cur;
  }
  for (std::size_t i = 0; i < s1.size(); ++i)
    out.residual = std::max(out.residual, max_abs(out.u * s1[i].m - s2[i].m * out.v));
  return out;
}

/// CSV rows: re(z), im(z), row, col, re(entry), im(entry).
inline void export_samples_csv(const std::vector<CharFunSample>& samples,
                               const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "re_z,im_z,row,col,re,im\n";
  for (const auto& s : samples)
    for (int r = 0; r < s.m.rows(); ++r)
      for (int c = 0; c < s.m.cols(); ++c)
        os << s.z.real() << ',' << s.z.imag() << ',' << r << ',' << c << ','
           << s.m(r, c).real() << ',' << s.m(r, c).imag() << '\n';
}

}  // namespace homog
