#pragma once

#include <vector>

#include "homog/mobius.hpp"
#include "homog/rational.hpp"

namespace homog {

/// Degree-truncated power series. Arithmetic never reads past degree N;
/// products are truncated back to the common degree.
template <class S>
struct TruncatedSeries {
  std::vector<S> c;  // c[0..N]

  TruncatedSeries() = default;
  explicit TruncatedSeries(int N) : c(std::size_t(N) + 1, S(0)) {}
  static TruncatedSeries constant(const S& v, int N) {
    TruncatedSeries s(N);
    s.c[0] = v;
    return s;
  }

  int degree() const { return int(c.size()) - 1; }
  const S& operator[](int i) const { return c[std::size_t(i)]; }
  S& operator[](int i) { return c[std::size_t(i)]; }

  TruncatedSeries operator+(const TruncatedSeries& o) const {
    TruncatedSeries r(std::min(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i) r[i] = c[i] + o.c[i];
    return r;
  }
  TruncatedSeries operator-(const TruncatedSeries& o) const {
    TruncatedSeries r(std::min(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i) r[i] = c[i] - o.c[i];
    return r;
  }
  TruncatedSeries operator*(const TruncatedSeries& o) const {
    TruncatedSeries r(std::min(degree(), o.degree()));
    for (int i = 0; i <= r.degree(); ++i)
      for (int j = 0; i + j <= r.degree(); ++j) r[i + j] += c[i] * o.c[j];
    return r;
  }
  TruncatedSeries operator*(const S& v) const {
    TruncatedSeries r = *this;
    for (auto& x : r.c) x *= v;
    return r;
  }

  TruncatedSeries derivative() const {
    TruncatedSeries r(degree());
    for (int i = 1; i <= degree(); ++i) r[i - 1] = c[i] * S(i);
    return r;
  }
};

using CSeries = TruncatedSeries<cplx>;
using RSeries = TruncatedSeries<Rational>;

/// outer(inner(z)) to the common truncation degree, by Horner on outer.
inline CSeries series_compose(const CSeries& outer, const CSeries& inner) {
  int N = std::min(outer.degree(), inner.degree());
  CSeries acc = CSeries::constant(outer[outer.degree()], N);
  for (int i = outer.degree() - 1; i >= 0; --i) {
    acc = acc * inner;
    acc[0] += outer[i];
  }
  return acc;
}

/// log of a series with c0 != 0 (principal branch at c0).
inline CSeries series_log(const CSeries& f) {
  int N = f.degree();
  if (std::abs(f[0]) == 0.0) throw std::invalid_argument("series_log: zero constant term");
  // log f = log c0 + integral(f'/f)
  CSeries r(N);
  CSeries fp = f.derivative();
  // Solve g with f * g = f' by forward substitution, then integrate.
  CSeries g(N);
  for (int i = 0; i <= N; ++i) {
    cplx s = (i <= fp.degree()) ? fp[i] : cplx(0.0);
    for (int j = 0; j < i; ++j) s -= g[j] * f[i - j];
    g[i] = s / f[0];
  }
  r[0] = std::log(f[0]);
  for (int i = 1; i <= N; ++i) r[i] = g[i - 1] / double(i);
  return r;
}

inline CSeries series_exp(const CSeries& f) {
  int N = f.degree();
  CSeries r(N);
  r[0] = std::exp(f[0]);
  // r' = f' r, solved degree by degree.
  for (int i = 1; i <= N; ++i) {
    cplx s(0.0);
    for (int j = 1; j <= i; ++j) s += double(j) * f[j] * r[i - j];
    r[i] = s / double(i);
  }
  return r;
}

/// f^t via exp(t log f); requires nonzero constant term.
inline CSeries series_pow(const CSeries& f, double t) {
  return series_exp(series_log(f) * cplx(t));
}

/// Taylor coefficients of z -> c(f, z)^lambda * f(z)^k to degree N.
/// Closed form: the expression equals
///   s(beta)^lambda (1-|a|^2)^{lambda/2} beta^k (z-a)^k (1-conj(a) z)^{-(lambda+k)}
/// and the last factor has the generalized binomial expansion.
/// Taylor coefficients of f itself: f = beta(-alpha + (1-|a|^2) sum_{m>=1} abar^{m-1} z^m).
inline CSeries mobius_taylor(const MobiusMap& f, int N) {
  CSeries s(N);
  s[0] = -f.beta * f.alpha;
  cplx c = f.beta * (1.0 - std::norm(f.alpha));
  cplx abar = std::conj(f.alpha);
  for (int m = 1; m <= N; ++m) {
    s[m] = c;
    c *= abar;
  }
  return s;
}

/// All columns c(f,.)^lambda f(.)^k, k = 0..N, by the multiplication
/// recurrence u_{k+1} = f u_k. Multiplication by f only raises degrees, so
/// the truncated coefficients are exact; this stays stable where the
/// closed-form convolution of series_compose_pow cancels catastrophically
/// at large k.
inline std::vector<CSeries> composition_power_columns(const MobiusMap& f, double lambda,
                                                      int N) {
  std::vector<CSeries> cols;
  cols.reserve(std::size_t(N) + 1);
  CSeries u(N);
  {
    cplx lead = sqrt_branch_pow(f.beta, lambda) * std::pow(1.0 - std::norm(f.alpha), lambda / 2.0);
    cplx abar = std::conj(f.alpha);
    cplx p = lead;
    for (int d = 0; d <= N; ++d) {  // (1 - abar z)^{-lambda}
      u[d] = p;
      p *= abar * ((lambda + double(d)) / double(d + 1));
    }
  }
  CSeries fz = mobius_taylor(f, N);
  for (int k = 0; k <= N; ++k) {
    cols.push_back(u);
    if (k < N) u = u * fz;
  }
  return cols;
}

inline CSeries series_compose_pow(const MobiusMap& f, double lambda, unsigned k, int N) {
  cplx a = f.alpha;
  cplx abar = std::conj(a);
  cplx lead = sqrt_branch_pow(f.beta, lambda) *
              std::pow(1.0 - std::norm(a), lambda / 2.0) * ipow(f.beta, k);
  double s = lambda + double(k);
  CSeries bin(N);  // (1 - conj(a) z)^{-s}
  cplx p(1.0, 0.0);
  for (int d = 0; d <= N; ++d) {
    bin[d] = p;
    p *= abar * ((s + double(d)) / double(d + 1));
  }
  CSeries poly(N);  // (z - a)^k, truncated
  for (unsigned m = 0; m <= k && int(m) <= N; ++m)
    poly[int(m)] = double(binomial_u64(k, m)) * ipow(-a, k - m);
  return (poly * bin) * lead;
}

}  // namespace homog
