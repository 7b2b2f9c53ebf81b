#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <mutex>

#include "homog/dilation.hpp"
#include "homog/extremal.hpp"
#include "homog/identities.hpp"
#include "homog/report.hpp"

namespace homog {

/// Parses "a", "bi", "a+bi", "a-bi" (also with "j" or trailing "*i").
inline std::optional<cplx> parse_complex(std::string s) {
  if (s.empty()) return std::nullopt;
  for (auto& ch : s)
    if (ch == 'j') ch = 'i';
  auto num = [](const std::string& t, double& out) {
    if (t.empty() || t == "+") {
      out = 1.0;
      return true;
    }
    if (t == "-") {
      out = -1.0;
      return true;
    }
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
  };
  // split at the last +/- that is not an exponent sign or leading
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }
  double re = 0.0, im = 0.0;
  if (s.back() == 'i') {
    std::string imag = s.substr(0, s.size() - 1);
    if (split == std::string::npos) {
      if (!num(imag, im)) return std::nullopt;
      return cplx(0.0, im);
    }
    std::string real = s.substr(0, split);
    imag = s.substr(split, s.size() - 1 - split);
    if (!num(real, re) || !num(imag, im)) return std::nullopt;
    return cplx(re, im);
  }
  if (!num(s, re)) return std::nullopt;
  return cplx(re, 0.0);
}

/// Configuration of a verification run. Scalars are kept as strings so the
/// exact backend can pick them up unrounded.
struct SuiteConfig {
  std::string lambda = "5/2";
  std::vector<std::string> mu{"1", "1"};
  int N = 48;
  int N_H = 24;
  int interior = 16;
  std::vector<cplx> grid = default_z_grid();
  std::map<std::string, double> tolerances;
  enum class Backend { Auto, Exact, Float } backend = Backend::Auto;
  std::vector<std::string> checks;
  std::uint64_t seed = 20240817;

  bool rational_params() const {
    if (!parse_rational(lambda)) return false;
    for (const auto& m : mu)
      if (!parse_rational(m)) return false;
    return true;
  }
  bool use_exact() const {
    if (backend == Backend::Exact) {
      if (!rational_params())
        throw std::invalid_argument("exact backend requires rational lambda, mu");
      return true;
    }
    return backend == Backend::Auto && rational_params();
  }
  Rational lambdaQ() const { return rational_or_throw(lambda); }
  std::vector<Rational> muQ() const {
    std::vector<Rational> v;
    for (const auto& m : mu) v.push_back(rational_or_throw(m));
    return v;
  }
  static double parse_scalar(const std::string& s) {
    if (auto q = parse_rational(s)) return to_double(*q);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      throw std::invalid_argument("not a numeric literal: " + s);
    return v;
  }
  double lambdaD() const { return parse_scalar(lambda); }
  std::vector<double> muD() const {
    std::vector<double> v;
    for (const auto& m : mu) v.push_back(parse_scalar(m));
    return v;
  }
  double tol(const std::string& id, double dflt) const {
    auto it = tolerances.find(id);
    return it == tolerances.end() ? dflt : it->second;
  }
  std::string echo() const {
    std::ostringstream os;
    os << "lambda=" << lambda << " mu=";
    for (std::size_t i = 0; i < mu.size(); ++i) os << (i ? "," : "") << mu[i];
    os << " N=" << N << " interior=" << interior;
    return os.str();
  }
};

namespace checks {

inline double max_on_columns(const Mtx& e, int nblocks, int N, int maxdeg) {
  double r = 0.0;
  maxdeg = std::min(maxdeg, N);
  for (int j = 0; j < nblocks; ++j)
    for (int c = 0; c <= maxdeg; ++c)
      r = std::max(r, e.col(j * (N + 1) + c).cwiseAbs().maxCoeff());
  return r;
}

inline VerificationReport mobius_group(const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 400; ++t) {
    MobiusMap f = random_mobius(rng), g = random_mobius(rng), h = random_mobius(rng);
    MobiusMap lhs = compose(compose(f, g), h), rhs = compose(f, compose(g, h));
    for (int i = 0; i < 3; ++i) {
      cplx z = std::polar(0.8 * std::sqrt(u(rng)), 2 * M_PI * u(rng) - M_PI);
      worst = std::max(worst, std::abs(lhs(z) - rhs(z)));
    }
    MobiusMap e = compose(f, invert(f));
    worst = std::max(worst, std::abs(e.alpha));
    worst = std::max(worst, std::abs(e.beta - 1.0));
    // cocycle square law on the closed disc
    cplx zc = std::polar(u(rng), 2 * M_PI * u(rng) - M_PI);
    cplx c = cocycle_c(f, zc);
    worst = std::max(worst, std::abs(c * c - f.derivative(zc)));
  }
  return VerificationReport::from_residual("mobius.group", "seeded samples", worst,
                                           cfg.tol("mobius.group", 1e-13));
}

inline VerificationReport mobius_multiplier(const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool exact_ok = true;
  for (int t = 0; t < 10000; ++t) {
    MobiusMap f = random_mobius(rng), g = random_mobius(rng);
    cplx m = multiplier_m0_raw(f, g);
    worst = std::max(worst, std::abs(std::abs(m) - 1.0));
    worst = std::max(worst, std::abs(m * m - 1.0));
    if (t < 1000) {
      // chain rule with multiplier at 10 points
      MobiusMap fi = invert(f), gi = invert(g), gifi = compose(gi, fi);
      for (int i = 0; i < 10; ++i) {
        cplx z = std::polar(0.95 * std::sqrt(u(rng)), 2 * M_PI * u(rng) - M_PI);
        worst = std::max(worst,
                         std::abs(m * cocycle_c(gi, fi(z)) * cocycle_c(fi, z) -
                                  cocycle_c(gifi, z)));
      }
      MobiusMap h = random_mobius(rng);
      int c1 = multiplier_m0(f, g) * multiplier_m0(compose(f, g), h);
      int c2 = multiplier_m0(f, compose(g, h)) * multiplier_m0(g, h);
      MobiusMap fg = compose(f, g);
      int simple = multiplier_m0(f, invert(f)) * multiplier_m0(g, invert(g)) *
                   multiplier_m0(fg, invert(fg)) * multiplier_m0(invert(g), invert(f));
      exact_ok = exact_ok && c1 == c2 && simple == multiplier_m0(f, g) &&
                 multiplier_m0(invert(g), invert(f)) ==
                     multiplier_m0(star(f), star(g));
    }
  }
  auto rep = VerificationReport::from_residual("mobius.multiplier", "10^4 seeded pairs",
                                               worst, cfg.tol("mobius.multiplier", 1e-12),
                                               "values depend on the fixed branch of s");
  if (!exact_ok) rep.status = "fail";
  return rep;
}

inline VerificationReport algebra_identity(const SuiteConfig& cfg, int which) {
  std::string id = which == 1 ? "algebra.identity1" : "algebra.identity2";
  if (!cfg.rational_params() || cfg.backend == SuiteConfig::Backend::Float)
    return VerificationReport::skipped(id, cfg.echo(), "exact identity needs rational lambda");
  Rational lam = cfg.lambdaQ();
  bool ok = true;
  for (unsigned l = 0; l <= 30 && ok; ++l) {
    if (which == 1) {
      for (unsigned j = 0; j < l && ok; ++j) ok = check_identity1(lam, j, l);
    } else {
      for (unsigned j = 0; j <= l && ok; ++j) ok = check_identity2(lam, j, l);
    }
  }
  return VerificationReport::from_exact(id, "lambda=" + cfg.lambda + " l<=30", ok);
}

inline VerificationReport spaces_recursion(const SuiteConfig& cfg) {
  std::string prm = cfg.echo() + " degree=40";
  if (cfg.use_exact()) {
    auto rep = check_kernel_recursion(cfg.lambdaQ(), cfg.muQ(), 40);
    return VerificationReport::from_exact("spaces.recursion", prm, rep.pass,
                                          rep.pass ? "" : rep.what());
  }
  // floating fallback: compare the coefficient matrices numerically
  double lam = cfg.lambdaD();
  auto mu = cfg.muD();
  auto dp = defect_parameters(lam, mu);
  double worst = 0.0;
  auto coeff = [](double l, const std::vector<double>& m, int ll, int p, int x, int y) {
    if (x < 0 || y < 0 || x - y != p - ll) return 0.0;
    double total = 0.0;
    for (int j = 0; j <= std::min(ll, p); ++j) {
      int d = x + ll - j;
      double s = l + 2.0 * j;
      double c = double(binomial_u64(unsigned(ll), unsigned(j))) *
                 double(binomial_u64(unsigned(p), unsigned(j))) * m[std::size_t(j)] /
                 (pochhammer(s, unsigned(ll - j)) * pochhammer(s, unsigned(p - j)));
      total += c * pochhammer(s, unsigned(d)) *
               std::exp(std::lgamma(d + 1.0) - std::lgamma(x + 1.0) - std::lgamma(y + 1.0));
    }
    return total;
  };
  const int n = int(mu.size());
  for (int l = 0; l < n; ++l)
    for (int p = 0; p < n; ++p)
      for (int x = 0; x <= 24; ++x) {
        int y = x - (p - l);
        if (y < 0 || x + y > 24) continue;
        double lhs = coeff(lam, mu, l, p, x, y) - coeff(lam, mu, l, p, x - 1, y - 1);
        double rhs = coeff(lam - 1.0, dp.mu_doubleprime, l, p, x, y);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
  return VerificationReport::from_residual("spaces.recursion", prm, worst,
                                           cfg.tol("spaces.recursion", 1e-10),
                                           "floating backend, degree 24");
}

inline VerificationReport spaces_positivity(const SuiteConfig& cfg) {
  double mineig = check_kernel_positivity(cfg.lambdaD(), cfg.muD(), default_positivity_grid());
  auto rep = VerificationReport::from_residual("spaces.positivity", cfg.echo() + " 25-pt grid",
                                               std::max(0.0, -mineig),
                                               cfg.tol("spaces.positivity", 1e-10));
  std::ostringstream os;
  os << "min eigenvalue " << mineig;
  rep.notes = os.str();
  return rep;
}

inline VerificationReport spaces_positivity_probe(const SuiteConfig& cfg) {
  double mineig = check_kernel_positivity(2.0, {1.0, -0.1}, default_positivity_grid());
  bool pass = mineig < -cfg.tol("spaces.positivity_probe", 1e-6);
  auto rep = VerificationReport::from_exact("spaces.positivity_probe",
                                            "lambda=2 mu=1,-1/10 25-pt grid", pass);
  rep.exact = false;
  rep.residual = mineig;
  rep.tolerance = -cfg.tol("spaces.positivity_probe", 1e-6);
  std::ostringstream os;
  os << "negative-weight probe; check asserts indefiniteness, min eigenvalue " << mineig;
  rep.notes = os.str();
  return rep;
}

inline VerificationReport blockops_exact(const SuiteConfig& cfg, const std::string& id) {
  std::string prm = cfg.echo();
  auto run_exact = [&](auto&& fn) {
    auto rep = fn(cfg.lambdaQ(), cfg.muQ(), cfg.N);
    return VerificationReport::from_exact(id, prm, rep.pass, rep.pass ? "" : rep.what());
  };
  auto run_float = [&](const Mtx& e, int maxdeg) {
    double res = max_on_columns(e, int(cfg.mu.size()), cfg.N, maxdeg);
    return VerificationReport::from_residual(id, prm, res, cfg.tol(id, 1e-10),
                                             "floating backend");
  };
  try {
    if (cfg.use_exact()) {
      if (id == "blockops.defect")
        return run_exact([](auto l, auto m, int N) { return check_defect_identity(l, m, N); });
      if (id == "blockops.ceq")
        return run_exact([](auto l, auto m, int N) { return check_C_equation(l, m, N); });
      return run_exact([](auto l, auto m, int N) { return check_master_at_zero(l, m, N); });
    }
    double lam = cfg.lambdaD();
    auto mu = cfg.muD();
    auto dp = defect_parameters(lam, mu);
    if (!dp.generic) throw std::domain_error("non-generic parameters");
    int N = cfg.N, n = int(mu.size());
    Mtx A = to_orthonormal(build_A(lam, mu, N));
    Mtx Bp = to_orthonormal(build_Bplus(lam, mu, dp.mu_prime(), N));
    Mtx Bm = to_orthonormal(build_Bplus(lam - 1.0, dp.mu_doubleprime, mu, N));
    if (id == "blockops.defect")
      return run_float(Bp.adjoint() * Bp + A.adjoint() * A -
                           Mtx::Identity(A.rows(), A.cols()),
                       N - 1);
    Mtx C = to_orthonormal(build_C(lam, mu, N));
    if (id == "blockops.ceq") return run_float(Bm * C + A * Bp.adjoint(), N - n - 1);
    return run_float(C * Bp + Bm.adjoint() * A, N - n - 1);
  } catch (const std::domain_error& e) {
    return VerificationReport::skipped(id, prm, std::string("non-generic rejection: ") + e.what());
  }
}

inline VerificationReport blockops_contractivity(const SuiteConfig& cfg) {
  double lam = cfg.lambdaD();
  auto mu = cfg.muD();
  auto dp = defect_parameters(lam, mu);
  std::string prm = cfg.echo();
  if (dp.generic || (lam >= 1.0 && !dp.generic)) {
    // contraction expected (generic or boundary): compression norm <= 1
    bool contraction = lam >= 1.0;
    for (std::size_t k = 0; k + 1 < mu.size() && contraction; ++k)
      contraction = mu[k + 1] / mu[k] >=
                    double((k + 1) * (k + 1)) / ((lam + 2 * double(k) - 1) * (lam + 2 * double(k)));
    if (contraction) {
      double norm = operator_norm(build_A(lam, mu, std::max(cfg.N, 60)));
      return VerificationReport::from_residual("blockops.contractivity", prm,
                                               std::max(0.0, norm - 1.0),
                                               cfg.tol("blockops.contractivity", 1e-12));
    }
  }
  auto hit = contractivity_violation_scan(lam, mu, 1e-3, 512);
  std::ostringstream os;
  if (hit)
    os << "inequalities violated; norm exceeds 1+1e-3 at N=" << *hit;
  else
    os << "inequalities violated but no norm excess found up to N=512";
  auto rep = VerificationReport::from_exact("blockops.contractivity", prm, hit.has_value(),
                                            os.str());
  return rep;
}

inline VerificationReport reps_projective(const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 7);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    MobiusMap f = random_mobius(rng, 0.5), g = random_mobius(rng, 0.5);
    auto r = check_projective_law(1.0, f, g, cfg.N, cfg.interior);
    worst = std::max(worst, std::abs(r.multiplier - multiplier_m0_raw(f, g)));
  }
  return VerificationReport::from_residual(
      "reps.projective", "lambda=1 100 seeded pairs N=" + std::to_string(cfg.N), worst,
      cfg.tol("reps.projective", 1e-8), "extracted multiplier vs m0");
}

inline std::vector<MobiusMap> companion_test_maps() {
  return {MobiusMap::rotation(cplx(0, 1)), involution_at(cplx(0.3, 0.0)),
          compose(MobiusMap::rotation(cplx(0, 1)), involution_at(cplx(0.2, 0.0)))};
}

inline VerificationReport reps_companion(const SuiteConfig& cfg) {
  try {
    double worst = 0.0;
    for (const MobiusMap& f : companion_test_maps())
      for (auto side : {CompanionSide::Right, CompanionSide::Left})
        worst = std::max(worst, companion_check(cfg.lambdaD(), cfg.muD(), f, cfg.N,
                                                cfg.interior, side));
    return VerificationReport::from_residual("reps.companion", cfg.echo() + " both sides",
                                             worst, cfg.tol("reps.companion", 1e-6));
  } catch (const std::domain_error& e) {
    return VerificationReport::skipped("reps.companion", cfg.echo(),
                                       std::string("non-generic rejection: ") + e.what());
  }
}

inline VerificationReport reps_defecttransf(const SuiteConfig& cfg) {
  Mtx T = to_orthonormal(build_A(cfg.lambdaD(), cfg.muD(), std::min(cfg.N, 32)));
  Mtx id = Mtx::Identity(T.rows(), T.cols());
  std::mt19937_64 rng(cfg.seed + 11);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    MobiusMap f = random_mobius(rng, 0.6);
    auto om = mobius_of_operator(f, T);
    Mtx lhs = id - om.phi_of_t.adjoint() * om.phi_of_t;
    Mtx rhs = om.c_of_t.adjoint() * (id - T.adjoint() * T) * om.c_of_t;
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return VerificationReport::from_residual("reps.defecttransf", cfg.echo(), worst,
                                           cfg.tol("reps.defecttransf", 1e-10));
}

inline VerificationReport charfun_master(const SuiteConfig& cfg) {
  try {
    double worst = 0.0;
    for (cplx z : cfg.grid)
      worst = std::max(worst, master_check(cfg.lambdaD(), cfg.muD(), z, cfg.N, cfg.interior));
    double at0 = master_check(cfg.lambdaD(), cfg.muD(), cplx(0.0), cfg.N, cfg.interior);
    std::ostringstream os;
    os << "z=0 residual " << at0;
    auto rep = VerificationReport::from_residual("charfun.master", cfg.echo() + " 6-pt grid",
                                                 worst, cfg.tol("charfun.master", 1e-6),
                                                 os.str());
    if (at0 > cfg.tol("charfun.master0", 1e-10)) rep.status = "fail";
    return rep;
  } catch (const std::domain_error& e) {
    return VerificationReport::skipped("charfun.master", cfg.echo(),
                                       std::string("non-generic rejection: ") + e.what());
  }
}

inline VerificationReport charfun_entrywise(const SuiteConfig& cfg) {
  try {
    double worst = 0.0;
    for (cplx z : cfg.grid)
      worst = std::max(worst, theta_forms_discrepancy(cfg.lambdaD(), cfg.muD(), z, cfg.N,
                                                      cfg.interior));
    return VerificationReport::from_residual("charfun.entrywise", cfg.echo(), worst,
                                             cfg.tol("charfun.entrywise", 1e-8));
  } catch (const std::domain_error& e) {
    return VerificationReport::skipped("charfun.entrywise", cfg.echo(),
                                       std::string("non-generic rejection: ") + e.what());
  }
}

inline VerificationReport charfun_covariance(const SuiteConfig& cfg) {
  Mtx T = to_orthonormal(build_A(cfg.lambdaD(), cfg.muD(), cfg.N));
  std::vector<cplx> grid{cplx(0.0), cplx(0.3, 0.0), cplx(0.0, 0.35), cplx(-0.2, -0.3),
                         0.4 * std::polar(1.0, M_PI / 4.0)};
  double res = check_covariance(T, involution_at(cplx(0.3, 0.0)), grid);
  return VerificationReport::from_residual("charfun.covariance",
                                           cfg.echo() + " f=phi_{0.3} |z|<=0.4", res,
                                           cfg.tol("charfun.covariance", 1e-5));
}

inline VerificationReport charfun_purecontraction(const SuiteConfig& cfg) {
  try {
    double worst = 0.0;
    bool strict = true;
    const int W = working_truncation(cfg.N, cfg.interior);
    for (cplx z : cfg.grid) {
      Mtx th = theta_generic(cfg.lambdaD(), cfg.muD(), z, W).m;
      auto sv = singular_values_sorted(
          interior_submatrix(th, int(cfg.mu.size()), W, int(cfg.mu.size()), W, cfg.interior));
      if (!sv.empty()) {
        worst = std::max(worst, sv.front() - 1.0);
        strict = strict && sv.front() < 1.0;
      }
    }
    auto rep = VerificationReport::from_residual("charfun.purecontraction", cfg.echo(),
                                                 std::max(0.0, worst),
                                                 cfg.tol("charfun.purecontraction", 1e-8));
    if (!strict) {
      rep.status = "fail";
      rep.notes = "an interior singular value reached 1";
    }
    return rep;
  } catch (const std::domain_error& e) {
    return VerificationReport::skipped("charfun.purecontraction", cfg.echo(),
                                       std::string("non-generic rejection: ") + e.what());
  }
}

inline VerificationReport dilation_check(const SuiteConfig& cfg) {
  int N = 32, nh = std::min(cfg.N_H, 24), K = 6;
  Mtx t = to_orthonormal(weighted_shift(cfg.lambdaD(), N));
  std::vector<int> deg(std::size_t(N) + 1, 0);
  for (int i = 0; i <= N; ++i) deg[std::size_t(i)] = i;
  auto rep = check_dilation(t, deg, N, nh, K,
                            {MobiusMap::rotation(cplx(0, 1)), involution_at(cplx(0.3, 0.0))});
  double tol_iso = cfg.tol("dilation.check", 1e-10);
  double worst = std::max(rep.isometry, rep.power_compression);
  auto out = VerificationReport::from_residual(
      "dilation.check", "T=weighted_shift(" + cfg.lambda + ") N=32 N_H=" + std::to_string(nh) +
                            " K=6",
      worst, tol_iso);
  std::ostringstream os;
  os << "phi(W) blocks residual " << rep.mobius_blocks;
  out.notes = os.str();
  if (rep.mobius_blocks > cfg.tol("dilation.phiblocks", 1e-8)) out.status = "fail";
  return out;
}

inline VerificationReport dilation_charop(const SuiteConfig& cfg) {
  Mtx t = 0.5 * to_orthonormal(weighted_shift(2.5, 24));
  auto rep = check_characteristic_operator(t, 32);
  auto out = VerificationReport::from_residual(
      "dilation.charop", "T=weighted_shift(5/2)/2 N=24 N_H=32", rep.coefficient,
      cfg.tol("dilation.charop", 1e-8));
  std::ostringstream os;
  os << "F* basis gram residual " << rep.gram;
  out.notes = os.str();
  if (rep.gram > 1e-10) out.status = "fail";
  return out;
}

inline VerificationReport dilation_sigmahat(const SuiteConfig& cfg) {
  double res = check_sigma_hat(3.0, {1.0}, involution_at(cplx(0.3, 0.0)), 24, 16);
  return VerificationReport::from_residual("dilation.sigmahat",
                                           "lambda=3 n=1 f=phi_{0.3} N=24 N_H=16", res,
                                           cfg.tol("dilation.sigmahat", 1e-5));
}

inline VerificationReport extremal_basis(const SuiteConfig& cfg) {
  bool ok = true;
  double worst = 0.0;
  for (double lambda : {2.0, 2.5})
    for (int p = 0; p <= 8; ++p)
      for (int k = 0; k <= p + 1; ++k) {
        auto rep = check_complement_basis(lambda, k, p);
        ok = ok && rep.pass;
        worst = std::max(worst, rep.membership);
      }
  return VerificationReport::from_residual("extremal.basis", "lambda in {2,5/2} p<=8",
                                           worst, cfg.tol("extremal.basis", 1e-10),
                                           ok ? "" : "basis defect");
}

inline VerificationReport extremal_kernel(const SuiteConfig& cfg) {
  bool ok = true;
  double worst = 0.0;
  for (double lambda : {2.5, 4.0})
    for (int n = 1; n <= 3; ++n)
      for (int p = 0; p <= 8; ++p) {
        auto rep = kernel_dimension_check(lambda, n, p);
        ok = ok && rep.dim == rep.expected;
        worst = std::max(worst, rep.mapping_residual);
      }
  auto out = VerificationReport::from_residual("extremal.kernel",
                                               "lambda in {5/2,4} n<=3 p<=8", worst,
                                               cfg.tol("extremal.kernel", 1e-10));
  if (!ok) {
    out.status = "fail";
    out.notes = "kernel dimension mismatch";
  }
  return out;
}

inline VerificationReport extremal_jet(const SuiteConfig& cfg) {
  auto rep = jet_check(Rational(2), 2, 12);
  double worst = std::max(rep.intertwine, rep.isometry);
  auto out = VerificationReport::from_residual("extremal.jet", "lambda=2 n=2 P=12", worst,
                                               cfg.tol("extremal.jet", 1e-10));
  if (!rep.kernel_exact) {
    out.status = "fail";
    out.notes = "exact kernel recursion part failed";
  } else {
    out.notes = "kernel recursion with mu''=e0 exact";
  }
  return out;
}

inline VerificationReport extremal_product(const SuiteConfig& cfg) {
  std::vector<cplx> grid;
  for (cplx z : cfg.grid)
    if (std::abs(z) <= 0.5) grid.push_back(z);
  if (grid.empty()) grid = {cplx(0.0), cplx(0.3, 0.0), cplx(0.0, 0.4)};
  double worst = 0.0, forms = 0.0;
  for (int n : {1, 2}) {
    auto rep = check_extremal_formula(2.0, n, grid, cfg.N, cfg.interior);
    worst = std::max(worst, rep.coincidence);
    forms = std::max(forms, rep.forms);
  }
  std::ostringstream os;
  os << "two displayed forms agree to " << forms;
  return VerificationReport::from_residual("extremal.product",
                                           "lambda=2 n in {1,2} |z|<=0.5", worst,
                                           cfg.tol("extremal.product", 1e-6), os.str());
}

}  // namespace checks

using CheckFn = std::function<VerificationReport(const SuiteConfig&)>;

inline const std::vector<std::pair<std::string, CheckFn>>& check_registry() {
  static const std::vector<std::pair<std::string, CheckFn>> reg = {
      {"algebra.identity1", [](const SuiteConfig& c) { return checks::algebra_identity(c, 1); }},
      {"algebra.identity2", [](const SuiteConfig& c) { return checks::algebra_identity(c, 2); }},
      {"blockops.ceq", [](const SuiteConfig& c) { return checks::blockops_exact(c, "blockops.ceq"); }},
      {"blockops.contractivity", checks::blockops_contractivity},
      {"blockops.defect", [](const SuiteConfig& c) { return checks::blockops_exact(c, "blockops.defect"); }},
      {"blockops.master0", [](const SuiteConfig& c) { return checks::blockops_exact(c, "blockops.master0"); }},
      {"charfun.covariance", checks::charfun_covariance},
      {"charfun.entrywise", checks::charfun_entrywise},
      {"charfun.master", checks::charfun_master},
      {"charfun.purecontraction", checks::charfun_purecontraction},
      {"dilation.charop", checks::dilation_charop},
      {"dilation.check", checks::dilation_check},
      {"dilation.sigmahat", checks::dilation_sigmahat},
      {"extremal.jet", checks::extremal_jet},
      {"extremal.kernel", checks::extremal_kernel},
      {"extremal.basis", checks::extremal_basis},
      {"extremal.product", checks::extremal_product},
      {"mobius.group", checks::mobius_group},
      {"mobius.multiplier", checks::mobius_multiplier},
      {"reps.companion", checks::reps_companion},
      {"reps.defecttransf", checks::reps_defecttransf},
      {"reps.projective", checks::reps_projective},
      {"spaces.recursion", checks::spaces_recursion},
      {"spaces.positivity", checks::spaces_positivity},
      {"spaces.positivity_probe", checks::spaces_positivity_probe},
  };
  return reg;
}

/// Resolves requested ids (exact or dotted-prefix matches) against the
/// registry; unknown ids throw.
inline std::vector<std::pair<std::string, CheckFn>> resolve_checks(
    const std::vector<std::string>& wanted) {
  std::vector<std::pair<std::string, CheckFn>> out;
  for (const auto& [id, fn] : check_registry()) {
    for (const auto& w : wanted)
      if (id == w || (id.size() > w.size() && id.compare(0, w.size(), w) == 0 &&
                      id[w.size()] == '.')) {
        out.emplace_back(id, fn);
        break;
      }
  }
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& [id, fn] : check_registry())
      known = known || id == w ||
              (id.size() > w.size() && id.compare(0, w.size(), w) == 0 && id[w.size()] == '.');
    if (!known) throw std::invalid_argument("unknown check id: " + w);
  }
  return out;
}

/// Runs the selected checks on a worker pool; reports come back sorted by
/// check id regardless of completion order, and are streamed to `stream`
/// as they finish when non-null.
inline std::vector<VerificationReport> run_suite(const SuiteConfig& cfg,
                                                 std::ostream* stream = nullptr) {
  auto selected = resolve_checks(cfg.checks);
  std::vector<VerificationReport> out(selected.size());
  std::mutex mx;
  unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                           unsigned(selected.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= selected.size()) return;
      auto t0 = std::chrono::steady_clock::now();
      VerificationReport rep;
      try {
        rep = selected[i].second(cfg);
      } catch (const std::exception& e) {
        rep = VerificationReport::skipped(selected[i].first, cfg.echo(),
                                          std::string("error: ") + e.what());
        rep.status = "fail";
      }
      rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
      std::lock_guard<std::mutex> lk(mx);
      if (stream) *stream << rep.one_line() << std::endl;
      out[i] = std::move(rep);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.check < b.check; });
  return out;
}

}  // namespace homog
