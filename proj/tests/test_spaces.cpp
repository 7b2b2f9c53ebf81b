#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "homog/linalg.hpp"
#include "homog/spaces.hpp"

using namespace homog;

TEST_CASE("gram diagonal examples") {
  // Hardy space: all monomials have unit norm.
  SpaceDescQ hardy(Rational(1), {Rational(1)}, 6);
  for (int d = 0; d <= 6; ++d) CHECK(gram_entry(hardy, 0, d) == Rational(1));

  SpaceDescQ bergman(Rational(2), {Rational(1)}, 4);
  CHECK(gram_entry(bergman, 0, 1) == Rational(1, 2));

  SpaceDescQ scaled(Rational(2), {Rational(4)}, 4);
  CHECK(gram_entry(scaled, 0, 0) == Rational(1, 4));

  auto g = gram_diagonal(bergman);
  CHECK(g.size() == 5);
  CHECK(g[2] == Rational(1, 3));  // 2!/(2)_2 = 2/6
  for (const auto& v : g) CHECK(v > Rational(0));
}

TEST_CASE("gram vs kernel coefficients, single block") {
  for (auto lam : {Rational(1), Rational(2), Rational(5, 2)}) {
    for (auto m : {Rational(1), Rational(4), Rational(2, 3)}) {
      SpaceDescQ sp(lam, {m}, 8);
      for (int d = 0; d <= 8; ++d) {
        Rational coef = kernel_coefficient(lam, {m}, 0, 0, d, d);
        CHECK(Rational(coef * gram_entry(sp, 0, d)) == Rational(1));
      }
    }
  }
}

TEST_CASE("log gram matches exact gram at moderate degrees") {
  SpaceDescD sp(2.5, {0.7, 1.3}, 40);
  SpaceDescQ spq(Rational(5, 2), {Rational(7, 10), Rational(13, 10)}, 40);
  for (int j = 0; j < 2; ++j)
    for (int d : {0, 1, 7, 25, 40}) {
      double lg = log_gram_entry(sp, j, d);
      double ex = std::log(to_double(gram_entry(spq, j, d)));
      CHECK(std::abs(lg - ex) < 1e-11);
    }
}

TEST_CASE("matrix kernel: corner entry and value at the origin") {
  double lambda = 2.0;
  std::vector<double> mu{1.0, 0.5, 0.25};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < 20; ++t) {
    cplx z(u(rng), u(rng)), w(u(rng), u(rng));
    Eigen::MatrixXcd B = matrix_kernel_B(lambda, mu, z, w);
    cplx corner = mu[0] * one_minus_pow(z * std::conj(w), -lambda);
    CHECK(std::abs(B(0, 0) - corner) < 1e-12);
    // Hermitian symmetry under the (z, w) swap.
    Eigen::MatrixXcd Bt = matrix_kernel_B(lambda, mu, w, z);
    CHECK(max_abs(B - Bt.adjoint().eval()) < 1e-12);
  }
  // B(0,0) is diagonal with the stated entries.
  Eigen::MatrixXcd B0 = matrix_kernel_B(lambda, mu, cplx(0), cplx(0));
  CHECK(std::abs(B0(0, 0) - mu[0]) < 1e-14);
  CHECK(std::abs(B0(0, 1)) < 1e-14);
  CHECK(std::abs(B0(1, 2)) < 1e-14);
  for (int l = 0; l < 3; ++l) {
    double want = 0.0;
    for (int j = 0; j <= l; ++j)
      want += std::pow(double(binomial_u64(unsigned(l), unsigned(j))), 2) * mu[std::size_t(j)] *
              pochhammer(1.0, unsigned(l - j)) / pochhammer(lambda + 2 * j, unsigned(l - j));
    CHECK(std::abs(B0(l, l) - want) < 1e-13);
  }
}

TEST_CASE("kernel positivity: generic weights pass, probe fails") {
  auto grid = default_positivity_grid();
  CHECK(grid.size() == 25);
  CHECK(check_kernel_positivity(2.0, {1.0, 1.0}, grid) > -1e-10);
  CHECK(check_kernel_positivity(2.5, {1.0, 1.0}, grid) > -1e-10);
  CHECK(check_kernel_positivity(7.0, {1.0, 2.0 / 3.0, 0.5}, grid) > -1e-10);
  // single point at the origin: diagonal positive matrix
  CHECK(check_kernel_positivity(2.0, {1.0}, {cplx(0), cplx(0.1)}) > -1e-12);
  // negative weight: non-definite on a suitable grid
  CHECK(check_kernel_positivity(2.0, {1.0, -0.1}, grid) < -1e-6);
}

TEST_CASE("kernel recursion: exact pass on generic and extremal data") {
  CHECK(check_kernel_recursion(Rational(5, 2), {Rational(1), Rational(1)}, 16).pass);
  // n = 1 reduces to (1-u)(1-u)^-2 = (1-u)^-1
  CHECK(check_kernel_recursion(Rational(2), {Rational(1)}, 20).pass);
  // extremal weights: mu'' = (1, 0) and the identity still holds
  auto dp = defect_parameters(Rational(2), {Rational(1), Rational(1, 2)});
  CHECK(dp.mu_doubleprime[0] == Rational(1));
  CHECK(dp.mu_doubleprime[1] == Rational(0));
  CHECK(!dp.generic);
  CHECK(check_kernel_recursion(Rational(2), {Rational(1), Rational(1, 2)}, 16).pass);
}

TEST_CASE("kernel recursion: mismatch is reported") {
  // Feed a wrong lambda into the comparison by perturbing mu; the first
  // failing coefficient is identified.
  Rational lam(5, 2);
  std::vector<Rational> mu{Rational(1), Rational(1)};
  auto dp = defect_parameters(lam, mu);
  // kernel_coefficient with the true mu'' differs from a perturbed one
  Rational good = kernel_coefficient(Rational(lam - 1), dp.mu_doubleprime, 1, 1, 1, 1);
  std::vector<Rational> bad = dp.mu_doubleprime;
  bad[1] += Rational(1, 7);
  CHECK(good != kernel_coefficient(Rational(lam - 1), bad, 1, 1, 1, 1));
}
