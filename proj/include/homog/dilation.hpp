#pragma once

#include <Eigen/SparseCore>

#include "homog/charfun.hpp"

namespace homog {

using SpMtx = Eigen::SparseMatrix<cplx>;

/// Minimal unitary dilation of a contraction T, truncated: Hardy factors
/// carry degrees < nh, the base space is whatever T acts on. Layout:
/// [defect copies at Hardy degree h: index h*b + i] ++ [base] ++ [dual copy].
struct Dilation {
  Mtx t, d, dstar;
  int b = 0, nh = 0;
  SpMtx w;

  int dim() const { return b * nh + b + b * nh; }
  int idx1(int h, int i) const { return h * b + i; }
  int idx2(int i) const { return b * nh + i; }
  int idx3(int h, int i) const { return b * nh + b + h * b + i; }
};

/// Blocks per the 3x3 description: shifts on the Hardy legs, T in the
/// middle, defect couplings at Hardy degree zero, and the corner carrying
/// x -> -T x between the defect copies.
inline Dilation build_dilation(const Mtx& t, int nh) {
  Dilation dl;
  dl.t = t;
  dl.b = int(t.rows());
  dl.nh = nh;
  auto p = defect_sqrt(t);
  dl.d = p.d;
  dl.dstar = p.dstar;
  const int b = dl.b;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(std::size_t(2 * b * nh + 4 * b * b));
  for (int h = 0; h + 1 < nh; ++h)
    for (int i = 0; i < b; ++i) {
      trip.emplace_back(dl.idx1(h + 1, i), dl.idx1(h, i), cplx(1.0));  // I (x) S
      trip.emplace_back(dl.idx3(h, i), dl.idx3(h + 1, i), cplx(1.0));  // I (x) S*
    }
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      if (dl.d(i, j) != cplx(0.0)) trip.emplace_back(dl.idx1(0, i), dl.idx2(j), dl.d(i, j));
      cplx cstar = -std::conj(t(j, i));  // adjoint of x -> -Tx
      if (cstar != cplx(0.0)) trip.emplace_back(dl.idx1(0, i), dl.idx3(0, j), cstar);
      if (t(i, j) != cplx(0.0)) trip.emplace_back(dl.idx2(i), dl.idx2(j), t(i, j));
      cplx ds = dl.dstar.adjoint()(i, j);
      if (ds != cplx(0.0)) trip.emplace_back(dl.idx2(i), dl.idx3(0, j), ds);
    }
  dl.w.resize(dl.dim(), dl.dim());
  dl.w.setFromTriplets(trip.begin(), trip.end());
  return dl;
}

struct DilationReport {
  double isometry = 0.0;        // || (W*W - I) || on the interior block
  double power_compression = 0.0;  // max_k || P W^k E - T^k ||
  double mobius_blocks = 0.0;   // phi(W) blocks vs their closed forms
};

namespace detail {
inline std::vector<int> dilation_interior(const Dilation& dl,
                                          const std::vector<int>& base_degree,
                                          int base_cut, int hardy_cut) {
  std::vector<int> idx;
  for (int h = 0; h <= hardy_cut; ++h)
    for (int i = 0; i < dl.b; ++i)
      if (base_degree[std::size_t(i)] <= base_cut) {
        idx.push_back(dl.idx1(h, i));
        idx.push_back(dl.idx3(h, i));
      }
  for (int i = 0; i < dl.b; ++i)
    if (base_degree[std::size_t(i)] <= base_cut) idx.push_back(dl.idx2(i));
  std::sort(idx.begin(), idx.end());
  return idx;
}
}  // namespace detail

/// (a) isometry of W on interior vectors, (b) power compression up to K,
/// (c) the closed forms of the phi(W) blocks, each on interior columns.
inline DilationReport check_dilation(const Mtx& t, const std::vector<int>& base_degree,
                                     int max_base_degree, int nh, int K,
                                     const std::vector<MobiusMap>& phis) {
  Dilation dl = build_dilation(t, nh);
  const int b = dl.b;
  DilationReport rep;

  // (a) isometry: interior block of W*W - I
  auto interior = detail::dilation_interior(dl, base_degree, max_base_degree - K - 1,
                                            nh - K - 1);
  {
    Mtx cols(dl.dim(), int(interior.size()));
    for (std::size_t k = 0; k < interior.size(); ++k)
      cols.col(int(k)) = Vec::Unit(dl.dim(), interior[k]);
    Mtx wc = dl.w * cols;
    Mtx g = wc.adjoint() * wc - Mtx::Identity(int(interior.size()), int(interior.size()));
    rep.isometry = max_abs(g);
  }

  // (b) P W^k E = T^k on base columns of degree <= max - K - 1
  for (int i = 0; i < b; ++i) {
    if (base_degree[std::size_t(i)] > max_base_degree - K - 1) continue;
    Vec v = Vec::Unit(dl.dim(), dl.idx2(i));
    Vec tk = Vec::Unit(b, i);
    for (int k = 1; k <= K; ++k) {
      v = dl.w * v;
      tk = dl.t * tk;
      double dev = (v.segment(b * nh, b) - tk).cwiseAbs().maxCoeff();
      rep.power_compression = std::max(rep.power_compression, dev);
    }
  }

  // (c) blocks of phi(W)
  Mtx wdense(dl.w);
  for (const MobiusMap& f : phis) {
    Mtx iden = Mtx::Identity(dl.dim(), dl.dim());
    Eigen::PartialPivLU<Mtx> lu(iden - std::conj(f.alpha) * wdense);
    auto phiW_col = [&](int c) { return lu.solve(f.beta * (wdense.col(c) - f.alpha * iden.col(c))).eval(); };

    Mtx s = Mtx::Zero(nh, nh);
    for (int h = 0; h + 1 < nh; ++h) s(h + 1, h) = 1.0;
    auto sm = mobius_of_operator(f, s);
    auto sstarm = mobius_of_operator(f, s.adjoint());
    auto tm = mobius_of_operator(f, t);

    int hcut = nh / 3, bcut = std::max(0, (max_base_degree + 1) / 3);
    double dev = 0.0;
    for (int i = 0; i < b; ++i) {
      if (base_degree[std::size_t(i)] > bcut) continue;
      // block (2,2) and (1,2): column idx2(i)
      Vec col = phiW_col(dl.idx2(i));
      Vec want2 = tm.phi_of_t.col(i);
      dev = std::max(dev, (col.segment(b * nh, b) - want2).cwiseAbs().maxCoeff());
      Vec dct = dl.d * tm.c_of_t.col(i);  // D c(f,T) e_i at Hardy degree 0
      for (int h = 0; h < nh; ++h)
        for (int j = 0; j < b; ++j) {
          cplx want = sm.c_of_t(h, 0) * dct(j);
          dev = std::max(dev, std::abs(col(dl.idx1(h, j)) - want));
        }
      for (int h = 0; h <= hcut; ++h) {
        // block (1,1): column idx1(h, i) restricted to the first leg
        Vec c1 = phiW_col(dl.idx1(h, i));
        for (int hh = 0; hh < nh; ++hh)
          for (int j = 0; j < b; ++j) {
            cplx want = (j == i) ? sm.phi_of_t(hh, h) : cplx(0.0);
            dev = std::max(dev, std::abs(c1(dl.idx1(hh, j)) - want));
          }
        // blocks (2,3) and (3,3): column idx3(h, i)
        Vec c3 = phiW_col(dl.idx3(h, i));
        Vec want23 = tm.c_of_t * dl.dstar.adjoint() * (sstarm.c_of_t(0, h) * Vec::Unit(b, i));
        dev = std::max(dev, (c3.segment(b * nh, b) - want23).cwiseAbs().maxCoeff());
        for (int hh = 0; hh < nh; ++hh)
          for (int j = 0; j < b; ++j) {
            cplx want = (j == i) ? sstarm.phi_of_t(hh, h) : cplx(0.0);
            dev = std::max(dev, std::abs(c3(dl.idx3(hh, j)) - want));
          }
      }
    }
    rep.mobius_blocks = std::max(rep.mobius_blocks, dev);
  }
  return rep;
}

struct CharOpReport {
  double gram = 0.0;         // orthonormality defect of the F* basis
  double coefficient = 0.0;  // worst Taylor-coefficient deviation
};

/// Extracts the characteristic operator from the dilation as the part of
/// W* from the visible shift leg to the hidden one, and compares its
/// coefficient stream against the Taylor coefficients of ThetaHat.
/// Requires ||T|| < 1 strictly so the hidden-leg sum converges.
inline CharOpReport check_characteristic_operator(const Mtx& t, int nh) {
  double tnorm = spectral_norm(t);
  if (tnorm >= 1.0) throw std::domain_error("check_characteristic_operator: need ||T|| < 1");
  Dilation dl = build_dilation(t, nh);
  const int b = dl.b;
  const int M = nh - 1;  // coefficients 0..M-1
  if (std::pow(tnorm, nh) > 1e-6)
    throw std::domain_error("check_characteristic_operator: tail does not converge");
  CharOpReport rep;

  // basis of the hidden copy: f_{m,i} = W^m (e_i in the dual leg at degree 0)
  std::vector<Mtx> fbasis{std::size_t(M), Mtx{}};
  Mtx cur(dl.dim(), b);
  for (int i = 0; i < b; ++i) cur.col(i) = Vec::Unit(dl.dim(), dl.idx3(0, i));
  for (int m = 0; m < M; ++m) {
    fbasis[std::size_t(m)] = cur;
    cur = (dl.w * cur).eval();
  }
  for (int m = 0; m < M; ++m)
    for (int mm = m; mm < M; ++mm) {
      Mtx g = fbasis[std::size_t(m)].adjoint() * fbasis[std::size_t(mm)];
      if (m == mm) g -= Mtx::Identity(b, b);
      rep.gram = std::max(rep.gram, max_abs(g));
    }

  // Theta(D x (x) 1): apply W* to the visible leg at degree 0
  ThetaDirect td(t);
  std::vector<Mtx> taylor;  // Taylor coefficients of ThetaHat
  taylor.push_back((-dl.dstar * t).eval());
  Mtx run = Mtx::Identity(b, b);
  for (int m = 1; m < M; ++m) {
    taylor.push_back(dl.dstar * run * (Mtx::Identity(b, b) - t.adjoint() * t));
    run = t.adjoint() * run;
  }
  Mtx emb(dl.dim(), b);
  emb.setZero();
  for (int i = 0; i < b; ++i) emb.block(0, i, b, 1) = dl.d.col(i);  // D e_i at degree 0
  Mtx wstar_emb = dl.w.adjoint() * emb;
  for (int m = 0; m < M; ++m) {
    Mtx cm = fbasis[std::size_t(m)].adjoint() * wstar_emb;  // m-th coefficient block
    rep.coefficient = std::max(rep.coefficient, max_abs(cm - taylor[std::size_t(m)]));
  }
  return rep;
}

/// Associated representation of the dilation: sigma-hat(f) must intertwine
/// f(W) with W. Assembled in inclusion coordinates from the companion
/// formulas; small sizes only.
inline double check_sigma_hat(double lambda, const std::vector<double>& mu,
                              const MobiusMap& f, int N, int nh) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("check_sigma_hat: non-generic parameters");
  BlockOpD Aop = build_A(lambda, mu, N);
  Mtx A = to_orthonormal(Aop);
  Dilation dl = build_dilation(A, nh);
  const int b = dl.b;

  Mtx Sigma = block_discrete_series_rep(Aop.dom, 0, f);
  cplx m0 = multiplier_m0_diag(f);
  Eigen::SelfAdjointEigenSolver<Mtx> dsol(dl.d), dssol(dl.dstar);
  Mtx dinv = dsol.eigenvectors() *
             dsol.eigenvalues().cwiseMax(1e-12).cwiseInverse().asDiagonal() *
             dsol.eigenvectors().adjoint();
  Mtx dsinv = dssol.eigenvectors() *
              dssol.eigenvalues().cwiseMax(1e-12).cwiseInverse().asDiagonal() *
              dssol.eigenvectors().adjoint();
  Mtx cInv = cocycle_inverse(f, A);
  Mtx pi = m0 * dl.d * Sigma * cInv * dinv;
  Mtx pistar = m0 * dl.dstar * Sigma * cInv.adjoint() * dsinv;
  Mtx d1p = discrete_series_rep(1.0, f, nh - 1).m;
  Mtx d1m = d1_minus_rep(f, nh - 1).m;

  Mtx sigma_hat = Mtx::Zero(dl.dim(), dl.dim());
  // Hardy-major layout: the leg factors are (rep on Hardy) kron (rep on base)
  auto put_leg = [&](int offset, const Mtx& hardy, const Mtx& base) {
    for (int h = 0; h < nh; ++h)
      for (int hh = 0; hh < nh; ++hh)
        if (std::abs(hardy(h, hh)) > 0.0)
          sigma_hat.block(offset + h * b, offset + hh * b, b, b) = hardy(h, hh) * base;
  };
  put_leg(0, d1p, pi);
  sigma_hat.block(b * nh, b * nh, b, b) = Sigma;
  put_leg(b * nh + b, d1m, pistar);

  Mtx wdense(dl.w);
  Mtx iden = Mtx::Identity(dl.dim(), dl.dim());
  Mtx fW = (iden - std::conj(f.alpha) * wdense)
               .partialPivLu()
               .solve(f.beta * (wdense - f.alpha * iden));
  Mtx E = sigma_hat * fW - wdense * sigma_hat;

  std::vector<int> base_degree(std::size_t(b), 0);
  for (int i = 0; i < b; ++i) base_degree[std::size_t(i)] = i % (N + 1);
  auto interior = detail::dilation_interior(dl, base_degree, N / 3, nh / 3);
  double res = 0.0;
  for (int c : interior)
    for (int r : interior) res = std::max(res, std::abs(E(r, c)));
  return res;
}

}  // namespace homog
