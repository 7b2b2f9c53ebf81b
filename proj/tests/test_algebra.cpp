#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "homog/identities.hpp"
#include "homog/series.hpp"

using namespace homog;

TEST_CASE("pochhammer basics") {
  CHECK(pochhammer(Rational(7), 0) == Rational(1));
  CHECK(pochhammer(Rational(2), 3) == Rational(24));
  CHECK(pochhammer(Rational(1, 2), 2) == Rational(3, 4));
  CHECK(pochhammer(2.0, 3) == doctest::Approx(24.0));
  CHECK(factorial<Rational>(5) == Rational(120));
  CHECK(binomial_u64(30, 15) == 155117520ull);
  CHECK(gen_binomial(Rational(7, 2), 2) == Rational(35, 8));
}

TEST_CASE("rational parsing") {
  CHECK(*parse_rational("5/2") == Rational(5, 2));
  CHECK(*parse_rational("-3/6") == Rational(-1, 2));
  CHECK(*parse_rational("7") == Rational(7));
  CHECK(*parse_rational("1.5") == Rational(3, 2));
  CHECK(*parse_rational("-0.25") == Rational(-1, 4));
  CHECK(!parse_rational("abc"));
  CHECK(!parse_rational("1/0"));
  CHECK(!parse_rational("1e-3"));
}

TEST_CASE("identity 1: spot values") {
  // lambda=2, j=0, l=1: both sides 1/2.
  CHECK(check_identity1(Rational(2), 0, 1));
  CHECK(check_identity1(Rational(5, 2), 1, 3));
}

TEST_CASE("identity 2: spot values") {
  CHECK(check_identity2(Rational(2), 0, 0));
  CHECK(check_identity2(Rational(3), 0, 2));
}

TEST_CASE("identities: exhaustive sweep l <= 30") {
  for (const Rational& lam : {Rational(2), Rational(5, 2), Rational(7)}) {
    for (unsigned l = 0; l <= 30; ++l) {
      for (unsigned j = 0; j < l; ++j) CHECK(check_identity1(lam, j, l));
      for (unsigned j = 0; j <= l; ++j) CHECK(check_identity2(lam, j, l));
    }
  }
}

TEST_CASE("series ring laws, exact rational backend") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-9, 9);
  auto rand_series = [&](int N) {
    RSeries s(N);
    for (int i = 0; i <= N; ++i) s[i] = ratio(num(rng), 1 + std::abs(num(rng)));
    return s;
  };
  for (int trial = 0; trial < 20; ++trial) {
    RSeries a = rand_series(12), b = rand_series(12), c = rand_series(12);
    RSeries ab = a * b, ba = b * a;
    for (int i = 0; i <= 12; ++i) CHECK(ab[i] == ba[i]);
    RSeries l = (a * b) * c, r = a * (b * c);
    for (int i = 0; i <= 12; ++i) CHECK(l[i] == r[i]);
    // Leibniz to truncation: (ab)' and a'b + ab' agree below the top degree.
    RSeries d1 = ab.derivative(), d2 = a.derivative() * b + a * b.derivative();
    for (int i = 0; i + 1 <= 12; ++i) CHECK(d1[i] == d2[i]);
  }
}

TEST_CASE("series composition matches pointwise evaluation") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  CSeries outer(20), inner(20);
  for (int i = 0; i <= 20; ++i) {
    outer[i] = cplx(u(rng), u(rng));
    inner[i] = cplx(u(rng), u(rng)) * 0.4;
  }
  inner[0] = cplx(0.05, -0.1);  // keep the composite inside convergence
  CSeries comp = series_compose(outer, inner);
  auto horner = [](const CSeries& s, cplx z) {
    cplx acc(0.0);
    for (int i = s.degree(); i >= 0; --i) acc = acc * z + s[i];
    return acc;
  };
  for (cplx z : {cplx(0.05, 0.0), cplx(-0.04, 0.06), cplx(0.0, 0.08)}) {
    // |inner coefficients| <= 0.4 and |z| <= 0.1 keep the truncation tail
    // far below the comparison tolerance
    CHECK(std::abs(horner(comp, z) - horner(outer, horner(inner, z))) < 1e-12);
  }
}

TEST_CASE("series exp/log/pow round trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CSeries f(16);
  f[0] = cplx(1.2, 0.3);
  for (int i = 1; i <= 16; ++i) f[i] = cplx(u(rng), u(rng));
  CSeries g = series_exp(series_log(f));
  for (int i = 0; i <= 16; ++i) CHECK(std::abs(g[i] - f[i]) < 1e-12);
  CSeries sq = series_pow(f, 2.0), ff = f * f;
  for (int i = 0; i <= 16; ++i) CHECK(std::abs(sq[i] - ff[i]) < 1e-11);
}

// Independent oracle for series_compose_pow: symbolic differentiation in the
// closed family sum c (z-a)^p (1-conj(a) z)^(-q), evaluated at 0.
namespace {
CSeries taylor_by_differentiation(const MobiusMap& f, double lambda, unsigned k, int N) {
  cplx a = f.alpha, abar = std::conj(a);
  std::map<std::pair<int, int>, cplx> terms;  // (p, j) with exponent q = lambda+k+j
  terms[{int(k), 0}] = sqrt_branch_pow(f.beta, lambda) *
                       std::pow(1.0 - std::norm(a), lambda / 2.0) * ipow(f.beta, k);
  CSeries out(N);
  double fact = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) fact *= double(n);
    cplx v(0.0);
    for (auto& [pj, c] : terms) v += c * ipow(-a, unsigned(pj.first));
    out[n] = v / fact;
    std::map<std::pair<int, int>, cplx> next;
    for (auto& [pj, c] : terms) {
      auto [p, j] = pj;
      double q = lambda + double(k) + double(j);
      if (p > 0) next[{p - 1, j}] += c * double(p);
      next[{p, j + 1}] += c * q * abar;
    }
    terms = std::move(next);
  }
  return out;
}
}  // namespace

TEST_CASE("series_compose_pow: trivial shapes") {
  auto id = MobiusMap::identity();
  CSeries s = series_compose_pow(id, 1.7, 3, 8);
  for (int i = 0; i <= 8; ++i) CHECK(std::abs(s[i] - (i == 3 ? cplx(1) : cplx(0))) < 1e-15);

  auto rot = MobiusMap::rotation(cplx(0, 1));
  CSeries r = series_compose_pow(rot, 0.0, 1, 8);
  CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-15);
  for (int i = 0; i <= 8; ++i)
    if (i != 1) CHECK(std::abs(r[i]) < 1e-15);
}

TEST_CASE("series_compose_pow: phi_{1/2} derivative series") {
  auto phi = involution_at(cplx(0.5, 0.0));
  CSeries s = series_compose_pow(phi, 2.0, 0, 2);
  CHECK(std::abs(s[0] - cplx(-0.75)) < 1e-14);
  CHECK(std::abs(s[1] - cplx(-0.75)) < 1e-14);
  CHECK(std::abs(s[2] - cplx(-0.5625)) < 1e-14);
}

TEST_CASE("series_compose_pow matches differentiation oracle") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 25; ++t) {
    MobiusMap f = random_mobius(rng, 0.8);
    double lambda = 0.25 + 3.0 * std::generate_canonical<double, 53>(rng);
    unsigned k = unsigned(t % 4);
    CSeries got = series_compose_pow(f, lambda, k, 20);
    CSeries want = taylor_by_differentiation(f, lambda, k, 20);
    for (int i = 0; i <= 20; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  }
}

TEST_CASE("series_compose_pow with lambda=2,k=0 equals Taylor of f'") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    MobiusMap f = random_mobius(rng, 0.7);
    CSeries s = series_compose_pow(f, 2.0, 0, 24);
    // cross-check against cocycle_c squared on sample points via Horner
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.3, 0.25), cplx(0.0, -0.4)}) {
      cplx acc(0.0);
      for (int i = 24; i >= 0; --i) acc = acc * z + s[i];
      cplx c = cocycle_c(f, z);
      CHECK(std::abs(acc - c * c) < 1e-9);
      CHECK(std::abs(c * c - f.derivative(z)) < 1e-13);
    }
  }
}
