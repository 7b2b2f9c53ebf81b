#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "homog/defect_params.hpp"
#include "homog/mobius.hpp"
#include "homog/rational.hpp"

namespace homog {

/// Descriptor of the weighted direct sum of kernel spaces with parameters
/// lambda + 2j and per-block weights mu_j, truncated at degree N per block.
/// A weight mu scales the block kernel by mu and divides squared norms by mu.
template <class S>
struct SpaceDesc {
  S lambda{};
  int n = 1;
  std::vector<S> mu;
  int N = 0;

  SpaceDesc() = default;
  SpaceDesc(S lam, std::vector<S> weights, int trunc)
      : lambda(lam), n(int(weights.size())), mu(std::move(weights)), N(trunc) {
    for (const S& w : mu)
      if (!(w > S(0))) throw std::invalid_argument("SpaceDesc: weights must be positive");
  }
  static SpaceDesc unit(S lam, int blocks, int trunc) {
    return SpaceDesc(lam, std::vector<S>(std::size_t(blocks), S(1)), trunc);
  }

  S block_lambda(int j) const { return S(lambda + S(2 * j)); }
  int dim() const { return n * (N + 1); }
  int flat(int block, int deg) const { return block * (N + 1) + deg; }
};

using SpaceDescQ = SpaceDesc<Rational>;
using SpaceDescD = SpaceDesc<double>;

/// Squared monomial norm of z^d in block j: (1/mu_j) d! / (lambda+2j)_d.
template <class S>
S gram_entry(const SpaceDesc<S>& sp, int block, int d) {
  return S(factorial<S>(unsigned(d)) / pochhammer(sp.block_lambda(block), unsigned(d)) /
           sp.mu[std::size_t(block)]);
}

template <class S>
std::vector<S> gram_diagonal(const SpaceDesc<S>& sp) {
  std::vector<S> g(std::size_t(sp.dim()));
  for (int j = 0; j < sp.n; ++j)
    for (int d = 0; d <= sp.N; ++d) g[std::size_t(sp.flat(j, d))] = gram_entry(sp, j, d);
  return g;
}

/// log of gram_entry, stable for large degrees.
inline double log_gram_entry(double lambda_block, double mu, int d) {
  return std::lgamma(double(d) + 1.0) -
         (std::lgamma(lambda_block + double(d)) - std::lgamma(lambda_block)) - std::log(mu);
}

inline double log_gram_entry(const SpaceDescD& sp, int block, int d) {
  return log_gram_entry(sp.block_lambda(block), sp.mu[std::size_t(block)], d);
}

/// d^a/dz^a d^b/dwbar^b of (1 - z wbar)^{-s}, closed form.
inline cplx kernel_derivative(double s, unsigned a, unsigned b, cplx z, cplx wbar) {
  cplx u = z * wbar;
  cplx total(0.0);
  for (unsigned j = 0; j <= std::min(a, b); ++j) {
    double coef = double(binomial_u64(a, j)) * double(binomial_u64(b, j)) *
                  pochhammer(1.0, j) * pochhammer(s, a + b - j);
    total += coef * ipow(z, b - j) * ipow(wbar, a - j) *
             one_minus_pow(u, -(s + double(a + b - j)));
  }
  return total;
}

/// The n x n matrix kernel with entries
///   sum_j C(l,j) C(p,j) mu_j / ((s_j)_{l-j} (s_j)_{p-j}) d^{l-j} dbar^{p-j} (1-z wbar)^{-s_j},
/// s_j = lambda + 2j. Hermitian under (z, w) swap; signs of mu unrestricted.
inline Eigen::MatrixXcd matrix_kernel_B(double lambda, const std::vector<double>& mu, cplx z,
                                        cplx w) {
  const int n = int(mu.size());
  Eigen::MatrixXcd B(n, n);
  cplx wbar = std::conj(w);
  for (int l = 0; l < n; ++l)
    for (int p = 0; p < n; ++p) {
      cplx e(0.0);
      for (int j = 0; j <= std::min(l, p); ++j) {
        double s = lambda + 2.0 * j;
        double c = double(binomial_u64(unsigned(l), unsigned(j))) *
                   double(binomial_u64(unsigned(p), unsigned(j))) * mu[std::size_t(j)] /
                   (pochhammer(s, unsigned(l - j)) * pochhammer(s, unsigned(p - j)));
        e += c * kernel_derivative(s, unsigned(l - j), unsigned(p - j), z, wbar);
      }
      B(l, p) = e;
    }
  return B;
}

/// Default sampling grid: 13 points on |z| = 0.3 and 12 points on |z| = 0.6.
inline std::vector<cplx> default_positivity_grid() {
  std::vector<cplx> pts;
  for (int k = 0; k < 13; ++k) pts.push_back(std::polar(0.3, 2.0 * M_PI * k / 13.0));
  for (int k = 0; k < 12; ++k) pts.push_back(std::polar(0.6, 2.0 * M_PI * k / 12.0 + 0.1));
  return pts;
}

/// Smallest eigenvalue of the sampled Gram block matrix of matrix_kernel_B.
inline double check_kernel_positivity(double lambda, const std::vector<double>& mu,
                                      const std::vector<cplx>& points) {
  const int n = int(mu.size());
  const int P = int(points.size());
  Eigen::MatrixXcd G(n * P, n * P);
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      G.block(i * n, j * n, n, n) = matrix_kernel_B(lambda, mu, points[std::size_t(i)],
                                                    points[std::size_t(j)]);
  G = (G + G.adjoint().eval()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Exact coefficient of z^x wbar^y in entry (l, p) of the matrix kernel.
inline Rational kernel_coefficient(const Rational& lambda, const std::vector<Rational>& mu,
                                   int l, int p, int x, int y) {
  if (x < 0 || y < 0 || x - y != p - l) return Rational(0);
  Rational total(0);
  for (int j = 0; j <= std::min(l, p); ++j) {
    int d = x + l - j;
    if (d < 0) continue;
    Rational s = Rational(lambda + 2 * j);
    Rational c = Rational(mpz_class(binomial_u64(unsigned(l), unsigned(j)))) *
                 Rational(mpz_class(binomial_u64(unsigned(p), unsigned(j)))) *
                 mu[std::size_t(j)];
    c /= pochhammer(s, unsigned(l - j)) * pochhammer(s, unsigned(p - j));
    c *= pochhammer(s, unsigned(d)) * factorial<Rational>(unsigned(d)) /
         (factorial<Rational>(unsigned(x)) * factorial<Rational>(unsigned(y)));
    total += c;
  }
  return total;
}

struct KernelRecursionReport {
  bool pass = true;
  int l = -1, p = -1, x = -1, y = -1;  // first mismatching coefficient
  std::string what() const {
    std::ostringstream os;
    os << "kernel recursion mismatch at entry (" << l << "," << p << "), coeff z^" << x
       << " wbar^" << y;
    return os.str();
  }
};

/// Exact check of (1 - z wbar) B^(lambda, mu) == B^(lambda-1, mu'') through
/// all coefficients of total degree <= degree.
inline KernelRecursionReport check_kernel_recursion(const Rational& lambda, const std::vector<Rational>& mu,
                                    int degree) {
  if (!(lambda > Rational(1)))
    throw std::invalid_argument("check_kernel_recursion: lambda must exceed 1");
  const int n = int(mu.size());
  auto dp = defect_parameters(lambda, mu);
  Rational lam1 = Rational(lambda - 1);
  for (int l = 0; l < n; ++l)
    for (int p = 0; p < n; ++p)
      for (int x = 0; x <= degree; ++x) {
        int y = x - (p - l);
        if (y < 0 || x + y > degree) continue;
        Rational lhs = kernel_coefficient(lambda, mu, l, p, x, y) -
                       kernel_coefficient(lambda, mu, l, p, x - 1, y - 1);
        Rational rhs = kernel_coefficient(lam1, dp.mu_doubleprime, l, p, x, y);
        if (lhs != rhs) return KernelRecursionReport{false, l, p, x, y};
      }
  return KernelRecursionReport{};
}

}  // namespace homog
