#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homog/suite.hpp"

using namespace homog;

TEST_CASE("complex literal parsing") {
  CHECK(std::abs(*parse_complex("0.3") - cplx(0.3, 0.0)) < 1e-15);
  CHECK(std::abs(*parse_complex("0.5i") - cplx(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(*parse_complex("-0.4+0.2i") - cplx(-0.4, 0.2)) < 1e-15);
  CHECK(std::abs(*parse_complex("-0.25-0.45i") - cplx(-0.25, -0.45)) < 1e-15);
  CHECK(std::abs(*parse_complex("i") - cplx(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(*parse_complex("-i") - cplx(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(*parse_complex("1e-2") - cplx(0.01, 0.0)) < 1e-17);
  CHECK(!parse_complex("abc"));
  CHECK(!parse_complex(""));
}

TEST_CASE("backend selection") {
  SuiteConfig cfg;
  cfg.lambda = "5/2";
  cfg.mu = {"1", "1"};
  CHECK(cfg.rational_params());
  CHECK(cfg.use_exact());
  cfg.backend = SuiteConfig::Backend::Float;
  CHECK(!cfg.use_exact());
  cfg.backend = SuiteConfig::Backend::Auto;
  cfg.mu = {"1", "0.3333333333333333e0"};
  CHECK(!cfg.rational_params());
  CHECK(!cfg.use_exact());
  cfg.backend = SuiteConfig::Backend::Exact;
  CHECK_THROWS(cfg.use_exact());
}

TEST_CASE("check resolution: ids and prefixes") {
  auto all = resolve_checks({"mobius"});
  CHECK(all.size() == 2);
  auto one = resolve_checks({"blockops.defect"});
  CHECK(one.size() == 1);
  CHECK_THROWS(resolve_checks({"blockops.defect.extra"}));
  CHECK_THROWS(resolve_checks({"nope"}));
  CHECK(resolve_checks({}).empty());
}

TEST_CASE("run_suite: deterministic, ordered, status semantics") {
  SuiteConfig cfg;
  cfg.lambda = "2";
  cfg.mu = {"1"};
  cfg.N = 24;
  cfg.interior = 8;
  cfg.checks = {"spaces.positivity", "mobius.group", "blockops.defect"};
  auto r1 = run_suite(cfg);
  auto r2 = run_suite(cfg);
  REQUIRE(r1.size() == 3);
  // sorted by id regardless of completion order
  CHECK(r1[0].check == "blockops.defect");
  CHECK(r1[1].check == "mobius.group");
  CHECK(r1[2].check == "spaces.positivity");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r1[i].check == r2[i].check);
    CHECK(r1[i].status == r2[i].status);
    if (r1[i].residual) CHECK(*r1[i].residual == *r2[i].residual);  // bit-identical
    CHECK(r1[i].status == "pass");
    // invariant: pass iff exact or residual <= tolerance
    if (!r1[i].exact && r1[i].residual && r1[i].tolerance)
      CHECK((r1[i].status == "pass") == (*r1[i].residual <= *r1[i].tolerance));
  }
  CHECK(r1[0].exact);  // rational parameters pick the exact backend
}

TEST_CASE("exact checks fall back or skip without rational data") {
  SuiteConfig cfg;
  cfg.lambda = "2.5000000000000001e0";  // not a rational literal
  cfg.mu = {"1"};
  cfg.N = 20;
  cfg.interior = 6;
  cfg.checks = {"algebra.identity1", "blockops.defect"};
  auto r = run_suite(cfg);
  CHECK(r[0].check == "algebra.identity1");
  CHECK(r[0].status == "skipped");
  CHECK(r[1].check == "blockops.defect");
  CHECK(r[1].status == "pass");
  CHECK(!r[1].exact);
  CHECK(r[1].notes == "floating backend");
}

TEST_CASE("non-generic parameters are rejected with a note") {
  SuiteConfig cfg;
  cfg.lambda = "2";
  cfg.mu = {"1", "1/2"};  // extremal: mu'' hits zero
  cfg.N = 16;
  cfg.interior = 5;
  cfg.checks = {"reps.companion"};
  auto r = run_suite(cfg);
  REQUIRE(r.size() == 1);
  CHECK(r[0].status == "skipped");
  CHECK(r[0].notes.find("non-generic") != std::string::npos);
}

TEST_CASE("report json shape") {
  auto rep = VerificationReport::from_residual("foo.bar", "p=1", 2.0, 1.0, "why");
  CHECK(rep.status == "fail");
  auto j = rep.to_json();
  CHECK(j["check"] == "foo.bar");
  CHECK(j["status"] == "fail");
  CHECK(j["residual"] == 2.0);
  CHECK(j["tolerance"] == 1.0);
  auto ex = VerificationReport::from_exact("foo.baz", "", true);
  CHECK(ex.to_json()["residual"] == "exact");
  auto sk = VerificationReport::skipped("foo.qux", "", "because");
  CHECK(sk.to_json()["status"] == "skipped");
}
