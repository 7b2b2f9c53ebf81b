#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

namespace homog {

/// Outcome of one registered check.
struct VerificationReport {
  std::string check;
  std::string params;
  std::string status;  // "pass" | "fail" | "skipped"
  bool exact = false;
  std::optional<double> residual;
  std::optional<double> tolerance;
  double elapsed_ms = 0.0;
  std::string notes;

  static VerificationReport from_residual(std::string id, std::string prm, double res,
                                          double tol, std::string note = "") {
    VerificationReport r;
    r.check = std::move(id);
    r.params = std::move(prm);
    r.residual = res;
    r.tolerance = tol;
    r.status = res <= tol ? "pass" : "fail";
    r.notes = std::move(note);
    return r;
  }
  static VerificationReport from_exact(std::string id, std::string prm, bool pass,
                                       std::string note = "") {
    VerificationReport r;
    r.check = std::move(id);
    r.params = std::move(prm);
    r.exact = true;
    r.status = pass ? "pass" : "fail";
    r.notes = std::move(note);
    return r;
  }
  static VerificationReport skipped(std::string id, std::string prm, std::string note) {
    VerificationReport r;
    r.check = std::move(id);
    r.params = std::move(prm);
    r.status = "skipped";
    r.notes = std::move(note);
    return r;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["params"] = params;
    j["status"] = status;
    if (exact)
      j["residual"] = "exact";
    else if (residual)
      j["residual"] = *residual;
    if (tolerance) j["tolerance"] = *tolerance;
    j["elapsed_ms"] = elapsed_ms;
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }

  std::string one_line() const {
    std::ostringstream os;
    os << (status == "pass" ? "[PASS]" : status == "fail" ? "[FAIL]" : "[SKIP]") << ' '
       << check;
    if (exact)
      os << "  exact";
    else if (residual) {
      os << "  residual=" << *residual;
      if (tolerance) os << " tol=" << *tolerance;
    }
    if (!notes.empty()) os << "  (" << notes << ')';
    return os.str();
  }
};

}  // namespace homog
