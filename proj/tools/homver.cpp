// homver: batch verification harness for the operator-model laboratory.
// Runs registered check suites over a parameter configuration and emits
// JSON-lines reports plus a summary table. Exit codes: 0 all pass, 1 any
// fail, 2 configuration error.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "homog/suite.hpp"

using namespace homog;

namespace {

int fail_config(const std::string& msg, const std::string& report_path) {
  VerificationReport rep;
  rep.check = "config";
  rep.status = "fail";
  rep.notes = msg;
  std::cerr << "[CONFIG ERROR] " << msg << "\n";
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    os << rep.to_json().dump() << "\n";
  }
  return 2;
}

void load_config_json(const std::string& path, SuiteConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  nlohmann::json j;
  is >> j;
  if (j.contains("lambda")) cfg.lambda = j["lambda"].is_string()
                                             ? j["lambda"].get<std::string>()
                                             : j["lambda"].dump();
  if (j.contains("mu")) {
    cfg.mu.clear();
    for (const auto& m : j["mu"])
      cfg.mu.push_back(m.is_string() ? m.get<std::string>() : m.dump());
  }
  if (j.contains("N")) cfg.N = j["N"].get<int>();
  if (j.contains("N_H")) cfg.N_H = j["N_H"].get<int>();
  if (j.contains("interior")) cfg.interior = j["interior"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("backend")) {
    std::string b = j["backend"].get<std::string>();
    if (b == "exact")
      cfg.backend = SuiteConfig::Backend::Exact;
    else if (b == "float")
      cfg.backend = SuiteConfig::Backend::Float;
    else if (b == "auto")
      cfg.backend = SuiteConfig::Backend::Auto;
    else
      throw std::invalid_argument("unknown backend: " + b);
  }
  if (j.contains("grid")) {
    cfg.grid.clear();
    for (const auto& g : j["grid"]) {
      auto z = parse_complex(g.get<std::string>());
      if (!z) throw std::invalid_argument("bad grid literal: " + g.get<std::string>());
      cfg.grid.push_back(*z);
    }
  }
  if (j.contains("checks")) {
    cfg.checks.clear();
    for (const auto& c : j["checks"]) cfg.checks.push_back(c.get<std::string>());
  }
  if (j.contains("tolerances"))
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it)
      cfg.tolerances[it.key()] = it.value().get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification harness for truncated operator-model identities"};
  SuiteConfig cfg;
  std::string config_path, report_path, export_path, backend_str, mu_csv, grid_csv;
  std::vector<std::string> tol_kv;
  bool list_only = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--check", cfg.checks, "check id or dotted prefix (repeatable)");
  app.add_option("--lambda", cfg.lambda, "parameter lambda, rational p/q or decimal");
  app.add_option("--mu", mu_csv, "comma list of weights");
  app.add_option("--truncation", cfg.N, "truncation degree N");
  app.add_option("--hardy-truncation", cfg.N_H, "Hardy-factor truncation");
  app.add_option("--interior", cfg.interior, "interior window");
  app.add_option("--grid", grid_csv, "comma list of complex literals a+bi");
  app.add_option("--tolerance", tol_kv, "override, form id=value (repeatable)");
  app.add_option("--backend", backend_str, "auto|exact|float");
  app.add_option("--seed", cfg.seed, "seed for random map sampling");
  app.add_option("--report", report_path, "JSON-lines report path");
  app.add_option("--export", export_path, "CSV export of characteristic-function samples");
  app.add_flag("--list", list_only, "list registered check ids and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_only) {
    for (const auto& [id, fn] : check_registry()) std::cout << id << "\n";
    return 0;
  }

  try {
    if (!config_path.empty()) {
      SuiteConfig fresh;
      fresh.checks = cfg.checks;  // command-line checks extend the file's
      load_config_json(config_path, fresh);
      for (const auto& c : cfg.checks)
        if (std::find(fresh.checks.begin(), fresh.checks.end(), c) == fresh.checks.end())
          fresh.checks.push_back(c);
      fresh.checks.erase(std::remove(fresh.checks.begin(), fresh.checks.end(), ""),
                         fresh.checks.end());
      std::swap(cfg, fresh);
    }
    auto split = [](const std::string& s) {
      std::vector<std::string> out;
      std::stringstream ss(s);
      for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
      return out;
    };
    if (!mu_csv.empty()) cfg.mu = split(mu_csv);
    if (!grid_csv.empty()) {
      cfg.grid.clear();
      for (const auto& g : split(grid_csv)) {
        auto z = parse_complex(g);
        if (!z) throw std::invalid_argument("bad grid literal: " + g);
        cfg.grid.push_back(*z);
      }
    }
    if (!backend_str.empty()) {
      if (backend_str == "exact")
        cfg.backend = SuiteConfig::Backend::Exact;
      else if (backend_str == "float")
        cfg.backend = SuiteConfig::Backend::Float;
      else if (backend_str == "auto")
        cfg.backend = SuiteConfig::Backend::Auto;
      else
        throw std::invalid_argument("unknown backend: " + backend_str);
    }
    for (const auto& kv : tol_kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad tolerance: " + kv);
      cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    if (cfg.N < 4 || cfg.N_H < 4 || cfg.interior < 1 || cfg.interior > cfg.N)
      throw std::invalid_argument("invalid truncation/interior sizes");
    if (cfg.mu.empty()) throw std::invalid_argument("mu must be non-empty");
    (void)cfg.lambdaD();
    (void)cfg.muD();
    resolve_checks(cfg.checks);
  } catch (const std::exception& e) {
    return fail_config(e.what(), report_path);
  }

  if (!export_path.empty()) {
    try {
      std::vector<CharFunSample> samples;
      for (cplx z : cfg.grid)
        samples.push_back(theta_generic(cfg.lambdaD(), cfg.muD(), z, cfg.N));
      export_samples_csv(samples, export_path);
      std::cout << "exported " << samples.size() << " samples to " << export_path << "\n";
    } catch (const std::exception& e) {
      return fail_config(std::string("export failed: ") + e.what(), report_path);
    }
  }

  auto reports = run_suite(cfg, &std::cout);

  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os) return fail_config("cannot open report path " + report_path, "");
    for (const auto& r : reports) os << r.to_json().dump() << "\n";
  }

  int npass = 0, nfail = 0, nskip = 0;
  std::cout << "\n" << std::left << std::setw(28) << "check" << std::setw(9) << "status"
            << std::setw(14) << "residual" << std::setw(11) << "tol"
            << "ms\n";
  for (const auto& r : reports) {
    std::ostringstream res;
    if (r.exact)
      res << "exact";
    else if (r.residual)
      res << std::setprecision(3) << *r.residual;
    std::ostringstream tl;
    if (r.tolerance) tl << std::setprecision(3) << *r.tolerance;
    std::cout << std::left << std::setw(28) << r.check << std::setw(9) << r.status
              << std::setw(14) << res.str() << std::setw(11) << tl.str() << std::fixed
              << std::setprecision(1) << r.elapsed_ms << "\n";
    std::cout.unsetf(std::ios::fixed);
    if (r.status == "pass") ++npass;
    if (r.status == "fail") ++nfail;
    if (r.status == "skipped") ++nskip;
  }
  std::cout << npass << " passed, " << nfail << " failed, " << nskip << " skipped\n";
  return nfail == 0 ? 0 : 1;
}
