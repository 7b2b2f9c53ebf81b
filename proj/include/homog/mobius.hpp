#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "homog/rational.hpp"

namespace homog {

inline cplx ipow(cplx z, unsigned k) {
  cplx r(1.0, 0.0);
  for (unsigned i = 0; i < k; ++i) r *= z;
  return r;
}

/// Principal argument in (-pi, pi]; std::arg may return -pi on the cut.
inline double principal_arg(cplx z) {
  double a = std::arg(z);
  if (a <= -M_PI) a = M_PI;
  return a;
}

/// Fixed square-root branch on the unit circle, s(1) = 1.
inline cplx sqrt_branch(cplx beta) { return std::polar(1.0, principal_arg(beta) / 2.0); }

/// s(beta)^t for real exponents, consistent with sqrt_branch at t = 1.
inline cplx sqrt_branch_pow(cplx beta, double t) {
  return std::polar(1.0, t * principal_arg(beta) / 2.0);
}

/// Principal power (1 - conj(alpha) z)^t; valid since the base has positive
/// real part throughout the closed disc.
inline cplx one_minus_pow(cplx abar_z, double t) {
  return std::exp(t * std::log(cplx(1.0, 0.0) - abar_z));
}

/// Disc automorphism z -> beta (z - alpha) / (1 - conj(alpha) z) in normal
/// form: |alpha| < 1, |beta| = 1. Value type, immutable after construction.
struct MobiusMap {
  cplx alpha{0.0, 0.0};
  cplx beta{1.0, 0.0};

  MobiusMap() = default;
  MobiusMap(cplx a, cplx b) : alpha(a), beta(b) {
    if (std::abs(alpha) >= 1.0) throw std::invalid_argument("MobiusMap: |alpha| >= 1");
    double m = std::abs(beta);
    if (m == 0.0 || std::abs(m - 1.0) > 1e-8)
      throw std::invalid_argument("MobiusMap: beta far from unit circle");
    beta /= m;
  }

  static MobiusMap identity() { return {}; }
  static MobiusMap rotation(cplx b) { return {cplx(0.0, 0.0), b}; }

  bool is_identity(double tol = 1e-14) const {
    return std::abs(alpha) <= tol && std::abs(beta - 1.0) <= tol;
  }
  bool is_rotation(double tol = 1e-14) const { return std::abs(alpha) <= tol; }

  cplx operator()(cplx z) const { return beta * (z - alpha) / (1.0 - std::conj(alpha) * z); }

  cplx derivative(cplx z) const {
    cplx d = 1.0 - std::conj(alpha) * z;
    return beta * (1.0 - std::norm(alpha)) / (d * d);
  }
};

/// The unique involution interchanging 0 and z: w -> (z - w)/(1 - conj(z) w).
inline MobiusMap involution_at(cplx z) {
  if (std::abs(z) >= 1.0) throw std::invalid_argument("involution_at: |z| >= 1");
  return MobiusMap(z, cplx(-1.0, 0.0));
}

/// Group law: returns z -> f(g(z)) in normal form.
inline MobiusMap compose(const MobiusMap& f, const MobiusMap& g) {
  // Product of the defining 2x2 matrices [[beta, -beta alpha], [-conj(alpha), 1]].
  cplx a = f.beta * (g.beta + f.alpha * std::conj(g.alpha));
  cplx c = -std::conj(f.alpha) * g.beta - std::conj(g.alpha);
  cplx d = 1.0 + std::conj(f.alpha) * g.alpha * g.beta;
  cplx alpha = std::conj(-c / d);
  cplx beta = a / d;
  return MobiusMap(alpha, beta / std::abs(beta));
}

inline MobiusMap invert(const MobiusMap& f) {
  return MobiusMap(-f.alpha * f.beta, std::conj(f.beta));
}

/// The outer automorphism f -> f*, i.e. f*(z) = conj(f(conj(z))).
inline MobiusMap star(const MobiusMap& f) {
  return MobiusMap(std::conj(f.alpha), std::conj(f.beta));
}

/// c(f, z) = s(beta) sqrt(1-|alpha|^2) / (1 - conj(alpha) z); its pointwise
/// square is f'(z).
inline cplx cocycle_c(const MobiusMap& f, cplx z) {
  return sqrt_branch(f.beta) * std::sqrt(1.0 - std::norm(f.alpha)) /
         (1.0 - std::conj(f.alpha) * z);
}

/// c(f, z)^t defined factor-wise: s(beta)^t, real positive power, principal
/// power of the denominator. Removes the branch ambiguity for real t.
inline cplx cocycle_pow(const MobiusMap& f, cplx z, double t) {
  return sqrt_branch_pow(f.beta, t) * std::pow(1.0 - std::norm(f.alpha), t / 2.0) *
         one_minus_pow(std::conj(f.alpha) * z, -t);
}

/// Multiplier of the lambda = 1 discrete series, as the unimodular value
///   s(conj(beta)) / (s(conj(beta1)) s(conj(beta2))) * u/|u|,
///   u = 1 + alpha1 conj(alpha2) conj(beta2),  beta from f o g.
/// Branch-dependent (fixed by sqrt_branch); always within 1e-12 of +-1.
inline cplx multiplier_m0_raw(const MobiusMap& f, const MobiusMap& g) {
  MobiusMap h = compose(f, g);
  cplx u = 1.0 + f.alpha * std::conj(g.alpha) * std::conj(g.beta);
  return sqrt_branch(std::conj(h.beta)) /
         (sqrt_branch(std::conj(f.beta)) * sqrt_branch(std::conj(g.beta))) * (u / std::abs(u));
}

/// m0 rounded to {-1, +1}.
inline int multiplier_m0(const MobiusMap& f, const MobiusMap& g) {
  cplx m = multiplier_m0_raw(f, g);
  return m.real() >= 0.0 ? 1 : -1;
}

/// m0(f, f^{-1}) = s(beta) s(conj(beta)).
inline cplx multiplier_m0_diag(const MobiusMap& f) {
  return sqrt_branch(f.beta) * sqrt_branch(std::conj(f.beta));
}

/// Seeded sampler: alpha uniform on the disc of radius alpha_max, beta
/// uniform on the circle.
inline MobiusMap random_mobius(std::mt19937_64& rng, double alpha_max = 0.95) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = alpha_max * std::sqrt(unit(rng));
  double ta = 2.0 * M_PI * unit(rng) - M_PI;
  double tb = 2.0 * M_PI * unit(rng) - M_PI;
  return MobiusMap(std::polar(r, ta), std::polar(1.0, tb));
}

}  // namespace homog
