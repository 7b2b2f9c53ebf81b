#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homog/blockops.hpp"

using namespace homog;

TEST_CASE("weighted shift: orthonormal weights") {
  auto s1 = to_orthonormal(weighted_shift(1.0, 8));
  for (int d = 0; d < 8; ++d) CHECK(std::abs(s1(d + 1, d) - 1.0) < 1e-14);
  auto s2 = to_orthonormal(weighted_shift(2.0, 8));
  CHECK(std::abs(s2(1, 0) - std::sqrt(0.5)) < 1e-14);
  for (int d = 0; d < 8; ++d)
    CHECK(std::abs(s2(d + 1, d) - std::sqrt((d + 1.0) / (2.0 + d))) < 1e-14);
  CHECK(operator_norm(weighted_shift(1.0, 16)) <= 1.0 + 1e-12);
  CHECK(operator_norm(weighted_shift(2.5, 16)) <= 1.0 + 1e-12);
}

TEST_CASE("derivative block: falling factorials on the k-th subdiagonal") {
  auto d0 = derivative_block(Rational(2), Rational(2), 0, 5);
  for (int i = 0; i <= 5; ++i) CHECK(d0.block(0, 0)(i, i) == Rational(1));
  auto d1 = derivative_block(Rational(2), Rational(4), 1, 5);
  CHECK(d1.block(0, 0)(1, 2) == Rational(2));  // d/dz z^2 = 2z
  auto d2 = derivative_block(Rational(2), Rational(6), 2, 5);
  CHECK(d2.block(0, 0)(3, 5) == Rational(20));  // d^2/dz^2 z^5 = 20 z^3
}

TEST_CASE("defect parameters: worked examples") {
  auto dp = defect_parameters(Rational(5, 2), {Rational(1), Rational(1)});
  CHECK(dp.generic);
  CHECK(dp.mu_doubleprime[1] == Rational(11, 15));

  auto n1 = defect_parameters(Rational(2), {Rational(1)});
  CHECK(n1.generic);
  CHECK(n1.mu_prime()[0] == Rational(2));
  CHECK(n1.mu_doubleprime[0] == Rational(1));

  auto ex = defect_parameters(Rational(2), {Rational(1), Rational(1, 2)});
  CHECK(!ex.generic);
}

TEST_CASE("build_A: triangularity and n=1 reduction") {
  auto A1 = build_A(2.5, std::vector<double>{1.0}, 10);
  auto W = weighted_shift(2.5, 10);
  CHECK(max_abs(to_orthonormal(A1) - to_orthonormal(W)) == 0.0);

  auto A = build_A(2.5, std::vector<double>{1.0, 0.7, 0.4}, 8);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(A.block_is_zero(i, j));

  // block (1,0) in the orthonormal basis: -sqrt(mu0/mu1)/lambda times the
  // gram-scaled degree-preserving map
  double lambda = 2.5, mu0 = 1.0, mu1 = 0.7;
  auto Af = to_orthonormal(build_A(lambda, {mu0, mu1}, 8));
  for (int d = 0; d <= 8; ++d) {
    double gr = std::exp(0.5 * (log_gram_entry(lambda + 2, 1.0, d) -
                                log_gram_entry(lambda, 1.0, d)));
    double want = -std::sqrt(mu0 / mu1) / lambda * gr;
    CHECK(std::abs(Af(9 + d, d) - want) < 1e-13);
  }
}

TEST_CASE("build_Bplus: diagonal blocks and triangularity") {
  // n=1, lambda=2, mu=1, mu'=2: orthonormal diagonal sqrt(1/(2+d))
  auto B = build_Bplus(2.0, std::vector<double>{1.0}, std::vector<double>{2.0}, 8);
  auto Bf = to_orthonormal(B);
  for (int d = 0; d <= 8; ++d) CHECK(std::abs(Bf(d, d) - std::sqrt(1.0 / (2.0 + d))) < 1e-13);

  auto dp = defect_parameters(2.5, std::vector<double>{1.0, 1.0});
  auto B2 = build_Bplus(2.5, std::vector<double>{1.0, 1.0}, dp.mu_prime(), 8);
  CHECK(B2.block_is_zero(0, 1));
  // diagonal blocks are identity degree maps in the monomial basis
  for (int d = 0; d <= 8; ++d) {
    CHECK(B2.block(0, 0)(d, d) == 1.0);
    CHECK(B2.block(1, 1)(d, d) == 1.0);
  }
}

TEST_CASE("middle operator: scalar constants") {
  // n=1: x00 = -1/sqrt(lambda(lambda-1)), y00 = -1
  for (double lambda : {2.0, 2.5, 3.0, 7.0}) {
    double x = middle_x(lambda, {1.0}, 0, 0);
    CHECK(std::abs(x + 1.0 / std::sqrt(lambda * (lambda - 1.0))) < 1e-14);
    CHECK(std::abs(middle_y(lambda, {1.0}, 0, 0) + 1.0) < 1e-14);
  }
  // zero pattern below the first subdiagonal
  CHECK(middle_x(2.5, {1.0, 1.0, 1.0}, 2, 0) == 0.0);
}

TEST_CASE("middle operator: zero pattern and orthonormal x factors") {
  std::vector<double> mu{1.0, 1.0};
  double lambda = 2.5;
  auto C = build_C(lambda, mu, 8);
  CHECK(C.dom.lambda == doctest::Approx(3.5));
  CHECK(C.cod.lambda == doctest::Approx(1.5));
  // j > k+1 blocks vanish (none for n=2), j=k+1 block is constant*identity
  CHECK(!C.block_is_zero(1, 0));
  for (int d = 0; d <= 8; ++d)
    CHECK(C.block(1, 0)(d, d) == doctest::Approx(C.block(1, 0)(0, 0)));

  // orthonormal blocks carry exactly the x_jk constants: the (1,0) block
  // is x_{1,0} times the identity because both sides sit at parameter
  // lambda+1 with equal scalar grams
  auto Cf = to_orthonormal(C);
  double x10 = middle_x(lambda, mu, 1, 0);
  for (int d = 0; d <= 8; ++d) CHECK(std::abs(Cf(9 + d, d) - x10) < 1e-13);
  CHECK_THROWS(build_C(2.0, std::vector<double>{1.0, 0.5}, 8));
}

TEST_CASE("weighted adjoint: involution and orthonormal consistency") {
  std::vector<double> mu{1.0, 0.6};
  auto A = build_A(2.5, mu, 10);
  auto I = BlockOpD::identity(A.dom);
  auto Iadj = weighted_adjoint(I);
  CHECK(max_abs(to_orthonormal(Iadj) - to_orthonormal(I)) < 1e-14);

  auto AA = weighted_adjoint(weighted_adjoint(A));
  CHECK(max_abs(to_orthonormal(AA) - to_orthonormal(A)) < 1e-12);

  // adjoint in the orthonormal basis is the conjugate transpose
  CHECK(max_abs(to_orthonormal(weighted_adjoint(A)) -
                to_orthonormal(A).adjoint().eval()) < 1e-12);

  auto sh = weighted_shift(2.0, 8);
  auto shadj = to_orthonormal(weighted_adjoint(sh));
  for (int d = 0; d < 8; ++d)
    CHECK(std::abs(shadj(d, d + 1) - std::sqrt((d + 1.0) / (2.0 + d))) < 1e-13);
}

TEST_CASE("defect identity: exact rational checks") {
  // n=1, lambda=2: (lambda-1)/(lambda+d) + (d+1)/(lambda+d) = 1
  CHECK(check_defect_identity(Rational(2), {Rational(1)}, 16).pass);
  CHECK(check_defect_identity(Rational(5, 2), {Rational(1), Rational(1)}, 16).pass);
  CHECK(check_defect_identity(Rational(7), {Rational(1), Rational(1), Rational(1)}, 12).pass);
  CHECK(check_defect_identity(Rational(7), {Rational(1), Rational(2, 3), Rational(1, 2)}, 12)
            .pass);
}

TEST_CASE("middle operator equation: exact rational checks") {
  CHECK(check_C_equation(Rational(2), {Rational(1)}, 16).pass);
  CHECK(check_C_equation(Rational(5, 2), {Rational(1), Rational(1)}, 16).pass);
  CHECK(check_C_equation(Rational(3), {Rational(1), Rational(1), Rational(1)}, 14).pass);
}

TEST_CASE("master identity at z=0: exact rational checks") {
  CHECK(check_master_at_zero(Rational(2), {Rational(1)}, 16).pass);
  CHECK(check_master_at_zero(Rational(5, 2), {Rational(1), Rational(1)}, 16).pass);
  CHECK(check_master_at_zero(Rational(3), {Rational(1), Rational(1), Rational(1)}, 14).pass);
}

TEST_CASE("contractivity: compressions stay inside the ball, probes escape") {
  CHECK(operator_norm(build_A(2.5, std::vector<double>{1.0, 1.0}, 24)) <= 1.0 + 1e-12);
  CHECK(operator_norm(build_A(7.0, std::vector<double>{1.0, 2.0 / 3.0, 0.5}, 20)) <=
        1.0 + 1e-12);
  auto hit = contractivity_violation_scan(1.5, {1.0, 0.1}, 1e-3, 512);
  REQUIRE(hit.has_value());
  CHECK(*hit <= 512);
}
