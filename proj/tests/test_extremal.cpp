#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homog/extremal.hpp"

using namespace homog;

TEST_CASE("h-basis: closed-form coefficients") {
  // p=0, j=0: the constant 1
  BiHomPoly h00 = h_basis(2.0, 0, 0);
  CHECK(std::abs(h00.a(0) - 1.0) < 1e-15);
  // j=0: coefficients binom(p-i+lambda-1, p-i)
  BiHomPoly h04 = h_basis(2.5, 0, 4);
  for (int i = 0; i <= 4; ++i)
    CHECK(std::abs(h04.a(i) - gen_binomial(1.5 + (4.0 - i), unsigned(4 - i))) < 1e-13);
  // lambda=2, j=1, p=2: coefficients i (3 - i) for i = 0, 1, 2
  BiHomPoly h12 = h_basis(2.0, 1, 2);
  CHECK(std::abs(h12.a(0) - 0.0) < 1e-15);
  CHECK(std::abs(h12.a(1) - 2.0) < 1e-15);
  CHECK(std::abs(h12.a(2) - 2.0) < 1e-15);
  // exact variant agrees
  CHECK(h_basis_coefficient(Rational(2), 1, 2, 1) == Rational(2));
  CHECK(h_basis_coefficient(Rational(2), 1, 2, 0) == Rational(0));
}

TEST_CASE("bihom norms") {
  // ||z^i w^{p-i}||^2 = (p-i)!/(lambda)_{p-i}
  BiHomPoly f(3);
  f.a(1) = 1.0;
  CHECK(std::abs(bihom_inner(2.0, f, f).real() - 2.0 / pochhammer(2.0, 2)) < 1e-14);
}

TEST_CASE("h-polynomials are a basis of the diagonal complement") {
  // boundary cases: k=0 gives the zero space, k=p+1 all of Hom(p)
  CHECK(check_complement_basis(2.0, 0, 3).pass);
  CHECK(check_complement_basis(2.0, 4, 3).pass);
  CHECK(check_complement_basis(2.5, 2, 4).pass);
  for (double lambda : {2.0, 2.5}) {
    for (int p = 0; p <= 8; ++p)
      for (int k = 0; k <= p + 1; ++k) CHECK(check_complement_basis(lambda, k, p).pass);
  }
}

TEST_CASE("theta-star action: basic values") {
  BiHomPoly one(0);
  one.a(0) = 1.0;
  BiHomPoly im = theta_star_action(2.5, one);
  CHECK(im.p == 0);
  CHECK(std::abs(im.a(0)) < 1e-15);

  BiHomPoly zpoly(1);
  zpoly.a(1) = 1.0;  // f = z
  BiHomPoly im2 = theta_star_action(2.5, zpoly);
  CHECK(std::abs(im2.a(0) + std::sqrt(1.5 / 2.5)) < 1e-14);

  // the j=0 h-polynomial of the lambda-1 scale is annihilated
  for (double lambda : {2.0, 3.5}) {
    for (int p : {1, 3, 6}) {
      BiHomPoly h = h_basis(lambda - 1.0, 0, p);
      BiHomPoly k = theta_star_action(lambda, h);
      for (int i = 0; i < p; ++i) CHECK(std::abs(k.a(i)) < 1e-12);
    }
  }
}

TEST_CASE("kernel dimensions match min(n, p+1)") {
  auto r1 = kernel_dimension_check(2.5, 1, 0);
  CHECK(r1.dim == 1);
  CHECK(r1.pass);
  auto r2 = kernel_dimension_check(2.5, 2, 5);
  CHECK(r2.dim == 2);
  CHECK(r2.pass);
  auto r3 = kernel_dimension_check(4.0, 3, 1);
  CHECK(r3.dim == 2);
  CHECK(r3.pass);
  for (double lambda : {2.5, 4.0})
    for (int n = 1; n <= 3; ++n)
      for (int p = 0; p <= 8; ++p) {
        auto r = kernel_dimension_check(lambda, n, p);
        CHECK(r.pass);
        CHECK(r.dim == std::min(n, p + 1));
      }
}

TEST_CASE("theta-star preserves the orthogonal splitting") {
  // both halves: the complement maps into the next complement (checked in
  // kernel_dimension_check) and the vanishing part stays vanishing
  double lambda = 2.5;
  for (int n : {2, 3}) {
    for (int p : {n, n + 2, n + 4}) {
      std::vector<BiHomPoly> target_complement;
      for (int j = 0; j < std::min(n - 1, p); ++j)
        target_complement.push_back(h_basis(lambda + 1.0, j, p - 1));
      auto onb = detail::orthonormalize(lambda + 1.0, target_complement);
      for (int s = 0; s + n <= p; ++s) {
        BiHomPoly im = theta_star_action(lambda, vanishing_monomial(n, s, p));
        double nrm = std::sqrt(std::abs(bihom_inner(lambda + 1.0, im, im).real()));
        if (nrm < 1e-13) continue;
        // image of the vanishing part stays orthogonal to the complement
        CHECK(detail::projection_norm(lambda + 1.0, im, onb) / nrm < 1e-10);
      }
    }
  }
}

TEST_CASE("filtration: complements grow with k") {
  // h-polynomials for order k stay orthogonal to everything vanishing to
  // order k+1 (the complements are nested)
  double lambda = 2.5;
  int p = 5;
  for (int k = 1; k <= p; ++k) {
    std::vector<BiHomPoly> vanish;
    for (int s = 0; s + k + 1 <= p; ++s) vanish.push_back(vanishing_monomial(k + 1, s, p));
    auto onb = detail::orthonormalize(lambda, vanish);
    for (int j = 0; j < k; ++j) {
      BiHomPoly h = h_basis(lambda, j, p);
      double nrm = std::sqrt(std::abs(bihom_inner(lambda, h, h).real()));
      CHECK(detail::projection_norm(lambda, h, onb) / nrm < 1e-10);
    }
  }
}

TEST_CASE("extremal weight family") {
  auto mu = extremal_weights_exact(Rational(2), 2);
  CHECK(mu[0] == Rational(1));
  CHECK(mu[1] == Rational(1, 2));
  auto dp = defect_parameters(Rational(2), mu);
  CHECK(dp.mu_doubleprime[0] == Rational(1));
  CHECK(dp.mu_doubleprime[1] == Rational(0));
}

TEST_CASE("jet construction: exact kernel part and numeric intertwining") {
  auto rep = jet_check(Rational(2), 2, 12);
  CHECK(rep.kernel_exact);
  CHECK(rep.intertwine < 1e-10);
  CHECK(rep.isometry < 1e-10);
  // n = 1 sanity: the jet is restriction to the diagonal
  auto rep1 = jet_check(Rational(3), 1, 10);
  CHECK(rep1.kernel_exact);
  CHECK(rep1.intertwine < 1e-10);
  CHECK(rep1.isometry < 1e-10);
}

TEST_CASE("extremal middle scalar is unimodular") {
  for (double lambda : {2.0, 2.5, 4.0})
    for (int n = 1; n <= 3; ++n) {
      auto mu = extremal_weights(lambda, n);
      auto dp = defect_parameters(lambda, mu);
      double muprime_top = 1.0 / dp.mu_prime_inv[std::size_t(n - 1)];
      double x = -pochhammer(1.0, unsigned(n - 1)) /
                 (std::sqrt(muprime_top) * pochhammer(lambda - 1.0, unsigned(2 * n - 1)));
      double y = x * std::sqrt(pochhammer(lambda - 1.0, unsigned(2 * n)));
      CHECK(std::abs(std::abs(y) - 1.0) < 1e-12);
    }
}

TEST_CASE("extremal formula: forms agree, coincidence with the direct form") {
  std::vector<cplx> grid{cplx(0.0), cplx(0.3, 0.0), cplx(0.0, 0.4), cplx(-0.3, 0.3)};
  for (int n : {1, 2}) {
    auto rep = check_extremal_formula(2.0, n, grid, 48, 16);
    CHECK(rep.forms < 1e-8);
    CHECK(rep.coincidence < 1e-6);
    CHECK(rep.contraction <= 1.0 + 1e-8);
  }
}
