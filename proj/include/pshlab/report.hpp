#pragma once

/// \file report.hpp
/// \brief Check rows and machine-readable run reports (JSON canonical, CSV
/// as a flat projection for plotting).
///
/// A report is {version, config, checks, timing_ms}.  Every numeric field
/// in a check is deterministic for a fixed config (quadrature reductions
/// are fixed-order pairwise sums), so two runs of the same config produce
/// byte-identical output except for the timing_ms line.  Provenance tags
/// say where the expected value comes from:
///   "closed-form"  — hand-evaluated exact expression.
///   "reference"    — value recorded alongside the catalog entry.
///   "consistency"  — two independent computations of the same quantity.
///   "inequality"   — one-sided bound; `expected` is the floor/ceiling.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "pshlab/errors.hpp"

namespace pshlab {

inline constexpr const char* kVersion = "1.0.0";

struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  std::string provenance;  ///< closed-form | reference | consistency | inequality
  double tol = 0.0;        ///< absolute tolerance (0 for exact bounds)
  bool pass = false;
};

/// Two-sided check: |value - expected| <= tol (absolute).
inline Check approx_check(std::string name, double value, double expected,
                          double tol, std::string provenance) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = expected;
  c.provenance = std::move(provenance);
  c.tol = tol;
  c.pass = std::abs(value - expected) <= tol;
  return c;
}

/// One-sided check: value >= floor - tol.
inline Check floor_check(std::string name, double value, double floor,
                         double tol = 0.0) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = floor;
  c.provenance = "inequality";
  c.tol = tol;
  c.pass = value >= floor - tol;
  return c;
}

/// One-sided check: value <= ceiling + tol.
inline Check ceiling_check(std::string name, double value, double ceiling,
                           double tol = 0.0) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = ceiling;
  c.provenance = "inequality";
  c.tol = tol;
  c.pass = value <= ceiling + tol;
  return c;
}

/// Informational row: always passes, expected echoes the value.
inline Check info_row(std::string name, double value,
                      std::string provenance = "reference") {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = value;
  c.provenance = std::move(provenance);
  c.tol = 0.0;
  c.pass = true;
  return c;
}

/// Non-asserted row that still shows a reference expectation next to the
/// measured value (tol 0, always passes); used where the expectation is a
/// recorded limit the finite-depth measurement is not required to hit.
inline Check reference_row(std::string name, double value, double expected,
                           std::string provenance = "reference") {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = expected;
  c.provenance = std::move(provenance);
  c.tol = 0.0;
  c.pass = true;
  return c;
}

struct Report {
  std::string version = kVersion;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Check> checks;
  double timing_ms = 0.0;

  bool all_pass() const {
    for (const Check& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const Check& c : checks) {
      rows.push_back({{"name", c.name},
                      {"value", c.value},
                      {"expected", c.expected},
                      {"provenance", c.provenance},
                      {"tol", c.tol},
                      {"pass", c.pass}});
    }
    return nlohmann::json{{"version", version},
                          {"config", config},
                          {"checks", rows},
                          {"timing_ms", timing_ms}};
  }

  /// Flat projection: one row per check.  The name column doubles as the
  /// x-label for plot series (e.g. "M_A[A=4]"), value as the y.  Version,
  /// config, and timing travel as comment lines so the table stays flat.
  std::string to_csv() const {
    std::string out = "# version " + version + "\n";
    out += "# config " + config.dump() + "\n";
    out += "name,value,expected,provenance,tol,pass\n";
    char buf[512];
    for (const Check& c : checks) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%s,%.17g,%d\n",
                    c.name.c_str(), c.value, c.expected, c.provenance.c_str(),
                    c.tol, c.pass ? 1 : 0);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "# timing_ms %.1f\n", timing_ms);
    out += buf;
    return out;
  }
};

/// Renders the report in the requested format ("json" or "csv").
inline std::string render_report(const Report& report,
                                 const std::string& format) {
  if (format == "json") return report.to_json().dump(2) + "\n";
  if (format == "csv") return report.to_csv();
  throw BadParams("render_report: format must be json or csv");
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    const auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace pshlab
