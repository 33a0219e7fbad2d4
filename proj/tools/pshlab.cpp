// pshlab — command-line front end for the laboratory library.
//
// Subcommands:
//   frames-selftest   coframe duality and frame commutator defects
//   psh-check         transverse/Cartesian Hessian positivity survey
//   mass              the three mass routes with their closed-form pins
//   bound             mass/derivative comparison and volume comparison
//   pohozaev          disk identity on a complex line through the origin
//   lelong            slope ladders and their invariants
//   separation        separated-form bound verifier
//   mollify-check     smoothing invariants (psh, monotonicity, commutation)
//   reproduce-all     the twelve scripted release checks
//
// Every run writes a report {version, config, checks, timing_ms} in JSON
// (canonical) or CSV (flat projection).  Reports for identical configs are
// byte-identical apart from the timing_ms line.  Exit codes: 0 when all
// asserted checks pass, 1 when a check fails or a computation cannot run,
// 2 for configuration errors.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pshlab/acceptance.hpp"

namespace {

using nlohmann::json;
using pshlab::cx;
using pshlab::CxPoint;
using pshlab::acceptance_detail::fmt;

struct Options {
  std::string command;
  std::string fn;
  std::map<std::string, double> params;
  std::vector<double> radii;   // empty = per-command default
  std::vector<double> depths;  // empty = per-command default
  std::string method = "all";
  double eps = 0.05;
  double zeta_re = 0.4;
  double zeta_im = 0.2;
  pshlab::QuadratureSpec quad;
  bool quad_overridden = false;
  double fd_h = 1e-4;
  int samples = 50;
  double delta = 1e-3;
  std::string format = "json";
  std::string output;  // empty = stdout
  int threads = 0;     // 0 = leave the worker environment alone
};

[[noreturn]] void config_error(const std::string& msg) {
  throw pshlab::ConfigError(msg);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    config_error(what + ": cannot parse number '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text,
                               const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(item, what));
  }
  if (out.empty()) config_error(what + ": empty list");
  return out;
}

void parse_param_flags(const std::vector<std::string>& kv, Options& o) {
  for (const std::string& s : kv) {
    const std::size_t pos = s.find('=');
    if (pos == std::string::npos || pos == 0) {
      config_error("--param: expected key=value, got '" + s + "'");
    }
    o.params[s.substr(0, pos)] = parse_double(s.substr(pos + 1), "--param");
  }
}

// ---------------------------------------------------------------------------
// Config file

void apply_config_file(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) config_error("--config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    config_error(std::string("--config: ") + e.what());
  }
  if (!j.is_object()) config_error("--config: top level must be an object");

  static const std::set<std::string> kAllowed = {
      "command", "fn",      "params",  "R",        "A",
      "method",  "eps",     "zeta",    "n_theta",  "n_eta",
      "n_phi",   "n_radial", "r_min_factor", "fd_h", "samples",
      "delta",   "format",  "output",  "threads"};
  for (const auto& item : j.items()) {
    if (kAllowed.find(item.key()) == kAllowed.end()) {
      config_error("--config: unknown key '" + item.key() + "'");
    }
  }

  const auto need_string = [&j](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) config_error(std::string(key) + " must be a string");
    dst = j[key].get<std::string>();
  };
  const auto need_number = [&j](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) config_error(std::string(key) + " must be a number");
    dst = j[key].get<double>();
  };
  const auto need_int = [&j](const char* key, int& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) {
      config_error(std::string(key) + " must be an integer");
    }
    dst = j[key].get<int>();
  };
  const auto need_list = [&j](const char* key, std::vector<double>& dst) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (v.is_number()) {
      dst = {v.get<double>()};
    } else if (v.is_array()) {
      dst.clear();
      for (const json& x : v) {
        if (!x.is_number()) config_error(std::string(key) + ": list entries must be numbers");
        dst.push_back(x.get<double>());
      }
      if (dst.empty()) config_error(std::string(key) + ": empty list");
    } else {
      config_error(std::string(key) + " must be a number or a list of numbers");
    }
  };

  need_string("command", o.command);
  need_string("fn", o.fn);
  need_string("method", o.method);
  need_string("format", o.format);
  need_string("output", o.output);
  if (j.contains("params")) {
    if (!j["params"].is_object()) config_error("params must be an object");
    for (const auto& item : j["params"].items()) {
      if (!item.value().is_number()) {
        config_error("params values must be numbers");
      }
      o.params[item.key()] = item.value().get<double>();
    }
  }
  need_list("R", o.radii);
  need_list("A", o.depths);
  need_number("eps", o.eps);
  if (j.contains("zeta")) {
    const json& z = j["zeta"];
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() ||
        !z[1].is_number()) {
      config_error("zeta must be a two-number list [re, im]");
    }
    o.zeta_re = z[0].get<double>();
    o.zeta_im = z[1].get<double>();
  }
  const bool quad_keys = j.contains("n_theta") || j.contains("n_eta") ||
                         j.contains("n_phi") || j.contains("n_radial") ||
                         j.contains("r_min_factor");
  need_int("n_theta", o.quad.n_theta);
  need_int("n_eta", o.quad.n_eta);
  need_int("n_phi", o.quad.n_phi);
  need_int("n_radial", o.quad.n_radial);
  need_number("r_min_factor", o.quad.r_min_factor);
  if (quad_keys) o.quad_overridden = true;
  need_number("fd_h", o.fd_h);
  need_int("samples", o.samples);
  need_number("delta", o.delta);
  need_int("threads", o.threads);
}

json echo_config(const Options& o) {
  json params = json::object();
  for (const auto& [k, v] : o.params) params[k] = v;
  return json{{"command", o.command},
              {"fn", o.fn},
              {"params", params},
              {"R", o.radii},
              {"A", o.depths},
              {"method", o.method},
              {"eps", o.eps},
              {"zeta", {o.zeta_re, o.zeta_im}},
              {"quadrature",
               {{"n_theta", o.quad.n_theta},
                {"n_eta", o.quad.n_eta},
                {"n_phi", o.quad.n_phi},
                {"n_radial", o.quad.n_radial},
                {"r_min_factor", o.quad.r_min_factor}}},
              {"fd_h", o.fd_h},
              {"samples", o.samples},
              {"delta", o.delta},
              {"format", o.format},
              {"output", o.output.empty() ? "-" : o.output},
              {"threads", o.threads}};
}

// ---------------------------------------------------------------------------
// Shared pieces

pshlab::CatalogEntry resolve_entry(const Options& o) {
  if (o.fn.empty()) config_error(o.command + ": --fn is required");
  return pshlab::make_entry(o.fn, o.params);
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Subcommands

void run_frames_selftest(const Options& o, pshlab::Report& r) {
  const auto samples =
      pshlab::random_hopf_samples(static_cast<std::size_t>(o.samples), 101u);
  r.checks.push_back(pshlab::approx_check(
      "coframe_duality_max_defect",
      pshlab::acceptance_detail::coframe_duality_defect(samples), 0.0, 1e-6,
      "closed-form"));
  r.checks.push_back(pshlab::approx_check(
      "reeb_pairing_max_defect",
      pshlab::acceptance_detail::reeb_pairing_defect(samples), 0.0, 1e-6,
      "closed-form"));
  for (const char* name : {"quad", "log_norm", "sym_plus_re"}) {
    const auto rep = pshlab::commutator_selftest(
        *pshlab::make_entry(name).field, samples, o.fd_h);
    r.checks.push_back(pshlab::approx_check(
        std::string("commutator_max_defect_") + name, rep.max_defect, 0.0,
        1e-5, "closed-form"));
  }
}

void run_psh_check(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  const bool smooth = entry.field->info().smooth_off_origin;
  // Smooth entries must clear the strict FD floor; a kink crossed by the
  // difference stencil legitimately costs a few ulps more.
  const double tol = smooth ? 1e-9 : 1e-6;
  const auto rep = pshlab::psh_check(
      *entry.field,
      pshlab::random_hopf_samples(static_cast<std::size_t>(o.samples)), tol,
      pshlab::FdSpec{o.fd_h});
  r.checks.push_back(pshlab::floor_check("min_transverse_hessian_eigenvalue",
                                         rep.min_eigen_S, 0.0, tol));
  r.checks.push_back(pshlab::floor_check("min_cartesian_hessian_eigenvalue",
                                         rep.min_eigen_cartesian, 0.0, tol));
  r.checks.push_back(pshlab::approx_check("positivity_verdicts_agree",
                                          rep.agree ? 1.0 : 0.0, 1.0, 0.0,
                                          "consistency"));
}

void run_mass(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  if (o.method != "volume" && o.method != "boundary" && o.method != "decomp" &&
      o.method != "all") {
    config_error("mass: --method must be volume, boundary, decomp, or all");
  }
  const bool want_v = o.method == "volume" || o.method == "all";
  const bool want_b = o.method == "boundary" || o.method == "all";
  const bool want_d = o.method == "decomp" || o.method == "all";

  pshlab::FieldPtr field = entry.field;
  const bool smooth = entry.field->info().smooth_off_origin;
  bool smoothed = false;
  pshlab::QuadratureSpec spec = o.quad;
  if (!smooth) {
    // Kinked max-type entries carry no usable jets; their mass lives on
    // the interface and is reached through smoothing.  Divisor-singular
    // entries keep their exact jets and run raw, reported informationally.
    const CxPoint probe{cx(0.31, 0.17), cx(0.12, -0.23)};
    if (!entry.field->closed_form_jet(probe).has_value()) {
      field = pshlab::mollified_field(entry.field, {o.eps, 3, 5});
      smoothed = true;
      if (!o.quad_overridden) spec = {16, 48, 16, 12, 1e-3};
      r.checks.push_back(pshlab::info_row("smoothed_with_epsilon", o.eps));
    } else {
      r.checks.push_back(
          pshlab::info_row("note_nonsmooth_entry_routes_informational", 0.0));
    }
  }

  const pshlab::FdSpec engine{o.fd_h};
  for (const double R : o.radii) {
    double v = 0.0, b = 0.0, d = 0.0;
    if (want_v) {
      v = pshlab::ma_volume(*field, R, -1.0, spec, engine);
      r.checks.push_back(pshlab::info_row(fmt("ma_volume[R=%g]", R), v));
    }
    if (want_b) {
      b = pshlab::ma_boundary(*field, R, spec, engine);
      r.checks.push_back(pshlab::info_row(fmt("ma_boundary[R=%g]", R), b));
    }
    if (want_d) {
      d = pshlab::ma_decomposition(*field, R, spec, engine);
      r.checks.push_back(pshlab::info_row(fmt("ma_decomp[R=%g]", R), d));
    }
    if (entry.name == "log_norm" && want_b) {
      r.checks.push_back(pshlab::approx_check(
          fmt("boundary_mass_over_pi_squared[R=%g]", R),
          b / (pshlab::kPi * pshlab::kPi), 1.0, 1e-6, "closed-form"));
    }
    if (entry.name == "quad" && want_v) {
      const double exact = pshlab::kPi * pshlab::kPi * R * R * R * R;
      r.checks.push_back(pshlab::approx_check(
          fmt("volume_mass_vs_quartic_law[R=%g]", R), v, exact, 1e-6 * exact,
          "closed-form"));
    }
    if (o.method == "all" && smooth) {
      // Boundary and decomposition both see the full ball mass, point mass
      // included, so they must agree for every smooth entry.  The volume
      // route integrates the density only; it matches the other two only
      // when the entry carries no point mass, and otherwise the difference
      // IS the point mass.
      r.checks.push_back(
          pshlab::approx_check(fmt("route_gap_decomp_vs_boundary[R=%g]", R),
                               rel_gap(d, b), 0.0, 1e-4, "consistency"));
      const double nu = entry.expected.nu.value_or(0.0);
      if (nu == 0.0) {
        r.checks.push_back(
            pshlab::approx_check(fmt("route_gap_boundary_vs_volume[R=%g]", R),
                                 rel_gap(b, v), 0.0, 1e-4, "consistency"));
        r.checks.push_back(
            pshlab::approx_check(fmt("route_gap_decomp_vs_volume[R=%g]", R),
                                 rel_gap(d, v), 0.0, 1e-4, "consistency"));
      } else {
        const double point_mass = (b - v) / (pshlab::kPi * pshlab::kPi);
        if (entry.expected.tau.has_value()) {
          r.checks.push_back(pshlab::reference_row(
              fmt("point_mass_over_pi_squared[R=%g]", R), point_mass,
              *entry.expected.tau));
        } else {
          r.checks.push_back(pshlab::info_row(
              fmt("point_mass_over_pi_squared[R=%g]", R), point_mass));
        }
      }
    }
    if (want_b) {
      const double tau_est = b / (pshlab::kPi * pshlab::kPi);
      if (entry.expected.tau.has_value()) {
        r.checks.push_back(pshlab::reference_row(fmt("tau_estimate[R=%g]", R),
                                                 tau_est,
                                                 *entry.expected.tau));
      } else {
        r.checks.push_back(
            pshlab::info_row(fmt("tau_estimate[R=%g]", R), tau_est));
      }
    }
  }
  if (entry.name == "osc_1d" && o.method == "all") {
    // The wells have widths exp(-k^5/2); the decomposition integrand
    // cancels only across them, so its route cannot converge on any
    // affordable grid even though the other two routes are exactly zero.
    r.checks.push_back(pshlab::info_row(
        "note_decomposition_limited_by_subresolution_wells", 0.0));
  }
}

void run_bound(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  if (!entry.field->info().smooth_off_origin) {
    config_error(
        "bound: the derivative comparison assumes a C^2 entry off the "
        "origin; '" +
        entry.name + "' is not (smooth it first or pick a smooth entry)");
  }
  const pshlab::FdSpec engine{o.fd_h};
  for (const double R : o.radii) {
    const auto rep = pshlab::theorem_bound(*entry.field, R, o.quad, engine);
    r.checks.push_back(
        pshlab::floor_check(fmt("comparison_slack[R=%g]", R), rep.slack, 0.0,
                            1e-6));
    if (entry.name == "log_norm") {
      r.checks.push_back(
          pshlab::approx_check(fmt("normalized_mass_lhs[R=%g]", R), rep.lhs,
                               1.0, 1e-6, "closed-form"));
      r.checks.push_back(
          pshlab::approx_check(fmt("derivative_product_rhs[R=%g]", R),
                               rep.rhs, 4.0, 1e-6, "closed-form"));
    } else {
      r.checks.push_back(
          pshlab::info_row(fmt("normalized_mass_lhs[R=%g]", R), rep.lhs));
      r.checks.push_back(
          pshlab::info_row(fmt("derivative_product_rhs[R=%g]", R), rep.rhs));
    }
    const auto vc = pshlab::volume_comparison(*entry.field, R, o.quad, engine);
    r.checks.push_back(pshlab::floor_check(fmt("volume_ratio_slack[R=%g]", R),
                                           vc.slack, 0.0, 1e-6));
    r.checks.push_back(
        pshlab::info_row(fmt("volume_ratio[R=%g]", R), vc.ratio));
  }
}

void run_pohozaev(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  const double R = o.radii.front();
  const auto rep =
      pshlab::pohozaev_residual(*entry.field, cx(o.zeta_re, o.zeta_im), R,
                                o.quad, pshlab::FdSpec{o.fd_h});
  r.checks.push_back(pshlab::info_row("pohozaev_lhs", rep.lhs));
  r.checks.push_back(pshlab::info_row("pohozaev_rhs", rep.rhs));
  const double nu = entry.expected.nu.value_or(0.0);
  const double expected_residual = -2.0 * pshlab::kPi * nu * nu;
  // Entries whose line restrictions are exactly smooth or exactly conical
  // meet the identity at desk scale; the rest are truncation- or
  // kink-limited and reported against the recorded expectation only.
  static const std::set<std::string> kExact = {"quad", "log_norm",
                                               "sym_plus_re", "separated"};
  if (kExact.count(entry.name) != 0) {
    const bool hand_oracle = entry.name == "quad" || entry.name == "log_norm";
    r.checks.push_back(pshlab::approx_check(
        "pohozaev_residual", rep.residual, expected_residual, 1e-6,
        "closed-form"));
  } else {
    r.checks.push_back(pshlab::reference_row("pohozaev_residual",
                                             rep.residual, expected_residual));
    r.checks.push_back(pshlab::info_row(
        entry.name == "max_green" ? "note_restriction_not_c2_informational"
                                  : "note_interior_truncation_limits_residual",
        0.0));
  }
}

void run_lelong(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  const auto& info = entry.field->info();
  const auto ladder =
      pshlab::lelong_ladder(*entry.field, o.depths, o.quad, o.delta);

  std::vector<std::pair<double, double>> ma_pairs;
  for (std::size_t i = 0; i < o.depths.size(); ++i) {
    const double A = o.depths[i];
    const double M = ladder.M_A[i];
    ma_pairs.emplace_back(A, M);
    if (entry.expected.m_slope) {
      const double rec = entry.expected.m_slope(A);
      r.checks.push_back(pshlab::approx_check(
          fmt("M_A[A=%g]", A), M, rec, std::max(0.01 * std::abs(rec), 1e-9),
          "closed-form"));
    } else {
      r.checks.push_back(pshlab::info_row(fmt("M_A[A=%g]", A), M));
    }
    if (info.s1_invariant) {
      r.checks.push_back(pshlab::approx_check(
          fmt("lipschitz_directional_gap[A=%g]", A), ladder.L_A[i] - M, 0.0,
          1e-3, "consistency"));
    } else {
      r.checks.push_back(pshlab::info_row(fmt("L_A[A=%g]", A), ladder.L_A[i]));
    }
    r.checks.push_back(pshlab::floor_check(
        fmt("sup_minus_mean_slope[A=%g]", A),
        ladder.V_slope[i] - ladder.S_slope[i], 0.0, 1e-9));
    r.checks.push_back(
        pshlab::info_row(fmt("mean_slope[A=%g]", A), ladder.S_slope[i]));
    r.checks.push_back(
        pshlab::info_row(fmt("sup_slope[A=%g]", A), ladder.V_slope[i]));
    r.checks.push_back(pshlab::info_row(fmt("N_A[A=%g]", A), ladder.N_A[i]));
  }

  if (ma_pairs.size() >= 2) {
    std::sort(ma_pairs.begin(), ma_pairs.end());
    double min_step = 1e300;
    for (std::size_t i = 0; i + 1 < ma_pairs.size(); ++i) {
      min_step = std::min(min_step,
                          ma_pairs[i].second - ma_pairs[i + 1].second);
    }
    if (entry.expected.m_slope) {
      r.checks.push_back(pshlab::floor_check(
          "directional_slope_nonincreasing_min_step", min_step, 0.0, 1e-9));
    } else {
      r.checks.push_back(pshlab::info_row(
          "directional_slope_nonincreasing_min_step", min_step));
    }
  }

  if (entry.expected.nu.has_value()) {
    r.checks.push_back(pshlab::reference_row("nu_estimate", ladder.nu_estimate,
                                             *entry.expected.nu));
  } else {
    r.checks.push_back(pshlab::info_row("nu_estimate", ladder.nu_estimate));
  }
  if (info.lipschitz_fails) {
    r.checks.push_back(pshlab::info_row(
        "note_directional_lipschitz_recorded_unbounded", 1.0));
  }
}

void run_separation(const Options& o, pshlab::Report& r) {
  Options local = o;
  if (local.fn.empty()) local.fn = "separated";
  const pshlab::CatalogEntry entry = pshlab::make_entry(local.fn, local.params);
  pshlab::SeparationReport rep;
  try {
    rep = pshlab::verify_separation(entry, local.depths, local.quad);
  } catch (const pshlab::NotSeparatedForm& e) {
    config_error(e.what());
  }
  for (std::size_t i = 0; i < rep.A_values.size(); ++i) {
    const double A = rep.A_values[i];
    r.checks.push_back(pshlab::floor_check(
        fmt("angular_min_above_lower_bound[A=%g]", A),
        rep.rdr_min[i] - rep.bound_lo[i], 0.0, 1e-9));
    r.checks.push_back(pshlab::floor_check(
        fmt("upper_bound_above_angular_max[A=%g]", A),
        rep.bound_hi[i] - rep.rdr_max[i], 0.0, 1e-9));
  }
  r.checks.push_back(pshlab::approx_check("separation_satisfied",
                                          rep.satisfied ? 1.0 : 0.0, 1.0, 0.0,
                                          "inequality"));
}

void run_mollify_check(const Options& o, pshlab::Report& r) {
  const pshlab::CatalogEntry entry = resolve_entry(o);
  const pshlab::MollifierSpec mspec{o.eps, 3, 5};

  // Kernel normalization: smoothing the constant 1 must return 1.
  {
    pshlab::FieldInfo info;
    info.name = "const_one";
    const pshlab::FieldPtr one = std::make_shared<pshlab::LambdaField>(
        info, [](const CxPoint&) { return 1.0; });
    const pshlab::FieldPtr s = pshlab::mollified_field(one, mspec);
    const CxPoint p{cx(0.2, 0.1), cx(-0.15, 0.3)};
    r.checks.push_back(pshlab::approx_check("smoothed_constant_value",
                                            s->eval(p), 1.0, 1e-12,
                                            "closed-form"));
  }

  const pshlab::FieldPtr smoothed =
      pshlab::mollified_field(entry.field, mspec);

  // Positivity of the value-level FD Hessian of the smoothed field: the
  // discrete convolution is a positive combination of translates, so for a
  // psh input it stays above -1e-6.
  {
    pshlab::FieldInfo info;
    info.name = entry.name + "_smoothed_values";
    const pshlab::FieldPtr values_only =
        std::make_shared<pshlab::LambdaField>(
            info,
            [smoothed](const CxPoint& p) { return smoothed->eval(p); });
    double min_eig = 1e300;
    for (const CxPoint& p : pshlab::acceptance_detail::interior_points()) {
      min_eig = std::min(
          min_eig,
          pshlab::jet_of(*values_only, p, pshlab::FdSpec{o.fd_h})
              .hessH.eig_min());
    }
    r.checks.push_back(pshlab::floor_check("smoothed_min_hessian_eigenvalue",
                                           min_eig, 0.0, 1e-6));
  }

  // Monotone decrease u_eps >= u_{eps/2} >= u at 20 interior points.
  {
    pshlab::MollifierSpec half = mspec;
    half.epsilon = 0.5 * mspec.epsilon;
    const pshlab::FieldPtr finer = pshlab::mollified_field(entry.field, half);
    auto pts = pshlab::acceptance_detail::interior_points();
    for (const CxPoint& p : pshlab::acceptance_detail::interior_points()) {
      pts.push_back(CxPoint{0.55 * p.z0, 0.55 * p.z1});
    }
    double violation = -1e300;
    for (const CxPoint& p : pts) {
      violation = std::max(violation, finer->eval(p) - smoothed->eval(p));
      violation = std::max(violation,
                           entry.field->eval(p) - finer->eval(p));
    }
    r.checks.push_back(pshlab::ceiling_check("monotone_decrease_max_violation",
                                             violation, 0.0, 1e-8));
  }

  // Derivative commutation (outer vs inner radial derivative) bound.
  {
    double worst = -1e300;
    double max_defect = 0.0;
    for (const CxPoint& p : pshlab::acceptance_detail::interior_points()) {
      if (p.abs() > 0.6) continue;
      const auto rep = pshlab::friedrichs_check(*entry.field, p, mspec, 0.1,
                                                {16, 12, 16, 12, 1e-3},
                                                pshlab::FdSpec{o.fd_h});
      worst = std::max(worst, rep.defect - rep.bound);
      max_defect = std::max(max_defect, rep.defect);
    }
    r.checks.push_back(pshlab::ceiling_check(
        "friedrichs_defect_minus_bound_max", worst, 0.0, 1e-9));
    r.checks.push_back(pshlab::info_row("friedrichs_max_defect", max_defect));
  }

  // Lipschitz stability of the directional slope under smoothing.
  {
    const double A = o.depths.front();
    const auto table = pshlab::lipschitz_stability_check(
        entry.field, A, {o.eps, 0.5 * o.eps, 0.25 * o.eps}, mspec);
    const auto& info = entry.field->info();
    if (info.s1_invariant && !info.lipschitz_fails) {
      r.checks.push_back(pshlab::approx_check(
          "lipschitz_stability_within_envelope",
          table.within_envelope ? 1.0 : 0.0, 1.0, 0.0, "inequality"));
    } else {
      r.checks.push_back(pshlab::info_row(
          "lipschitz_stability_within_envelope",
          table.within_envelope ? 1.0 : 0.0));
    }
    r.checks.push_back(
        pshlab::reference_row(fmt("L_base[A=%g]", A), table.L_base,
                              table.L_base));
    for (const auto& row : table.rows) {
      r.checks.push_back(pshlab::info_row(
          fmt("L_smoothed[eps=%g]", row.epsilon), row.L_eps));
    }
  }
}

void run_reproduce_all(const Options&, pshlab::Report& r) {
  static const char* kProvenance[12] = {
      "closed-form", "closed-form", "consistency", "closed-form",
      "reference",   "inequality",  "inequality",  "closed-form",
      "consistency", "consistency", "inequality",  "inequality"};
  const auto results =
      pshlab::run_acceptance([](const pshlab::CriterionResult& res) {
        std::fprintf(stderr, "[%2d/12] %s  %s  (%.0f ms)\n", res.index,
                     res.pass ? "PASS" : "FAIL", res.label.c_str(),
                     res.elapsed_ms);
        for (const std::string& line : res.details) {
          std::fprintf(stderr, "        %s\n", line.c_str());
        }
      });
  for (const auto& res : results) {
    r.checks.push_back(pshlab::approx_check(fmt("criterion_%02d", res.index),
                                            res.pass ? 1.0 : 0.0, 1.0, 0.0,
                                            kProvenance[res.index - 1]));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pshlab — desk-scale laboratory for residual Monge-Ampere mass, "
      "Lelong functionals, and smoothing on the unit ball of C^2"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string fn, method = "all", format = "json", output, config_path;
  std::vector<std::string> param_kv;
  std::string r_list, a_list, zeta_list;
  double eps = 0.05, r_min_factor = 1e-3, fd_h = 1e-4, delta = 1e-3;
  int n_theta = 32, n_eta = 24, n_phi = 32, n_radial = 24;
  int samples = 50, threads = 0;

  app.add_option("--fn", fn, "catalog entry name");
  app.add_option("--param", param_kv,
                 "entry parameter key=value (repeatable)");
  app.add_option("--R", r_list, "radii, comma-separated");
  app.add_option("--A", a_list, "depths, comma-separated");
  app.add_option("--zeta", zeta_list, "line direction ratio re,im");
  app.add_option("--method", method, "mass route: volume|boundary|decomp|all");
  app.add_option("--eps", eps, "mollifier radius");
  app.add_option("--n-theta", n_theta, "fiber-angle nodes");
  app.add_option("--n-eta", n_eta, "latitude nodes");
  app.add_option("--n-phi", n_phi, "base-angle nodes");
  app.add_option("--n-radial", n_radial, "radial nodes");
  app.add_option("--r-min-factor", r_min_factor,
                 "inner cutoff as a fraction of R");
  app.add_option("--fd-h", fd_h, "finite-difference step");
  app.add_option("--samples", samples, "random sample-point count");
  app.add_option("--delta", delta, "ladder forward-difference step");
  app.add_option("--format", format, "report format: json|csv");
  app.add_option("--output", output, "report file path (default stdout)");
  app.add_option("--threads", threads, "worker cap (0 = library default)");
  app.add_option("--config", config_path, "JSON config file");

  static const std::array<std::pair<const char*, const char*>, 9> kCommands{
      {{"frames-selftest", "coframe duality and frame commutator defects"},
       {"psh-check", "Hessian positivity survey at random points"},
       {"mass", "the three mass routes with closed-form pins"},
       {"bound", "mass/derivative and volume comparison bounds"},
       {"pohozaev", "disk identity on a complex line"},
       {"lelong", "slope ladders and their invariants"},
       {"separation", "separated-form bound verifier"},
       {"mollify-check", "smoothing invariants"},
       {"reproduce-all", "the twelve scripted release checks"}}};
  for (const auto& [name, desc] : kCommands) {
    app.add_subcommand(name, desc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Options o;
    if (app.count("--config") > 0) apply_config_file(config_path, o);
    if (app.count("--fn") > 0) o.fn = fn;
    if (app.count("--param") > 0) parse_param_flags(param_kv, o);
    if (app.count("--R") > 0) o.radii = parse_list(r_list, "--R");
    if (app.count("--A") > 0) o.depths = parse_list(a_list, "--A");
    if (app.count("--zeta") > 0) {
      const auto z = parse_list(zeta_list, "--zeta");
      if (z.size() != 2) config_error("--zeta: expected re,im");
      o.zeta_re = z[0];
      o.zeta_im = z[1];
    }
    if (app.count("--method") > 0) o.method = method;
    if (app.count("--eps") > 0) o.eps = eps;
    if (app.count("--n-theta") > 0) o.quad.n_theta = n_theta;
    if (app.count("--n-eta") > 0) o.quad.n_eta = n_eta;
    if (app.count("--n-phi") > 0) o.quad.n_phi = n_phi;
    if (app.count("--n-radial") > 0) o.quad.n_radial = n_radial;
    if (app.count("--r-min-factor") > 0) o.quad.r_min_factor = r_min_factor;
    if (app.count("--n-theta") + app.count("--n-eta") + app.count("--n-phi") +
            app.count("--n-radial") + app.count("--r-min-factor") >
        0) {
      o.quad_overridden = true;
    }
    if (app.count("--fd-h") > 0) o.fd_h = fd_h;
    if (app.count("--samples") > 0) o.samples = samples;
    if (app.count("--delta") > 0) o.delta = delta;
    if (app.count("--format") > 0) o.format = format;
    if (app.count("--output") > 0) o.output = output;
    if (app.count("--threads") > 0) o.threads = threads;

    const auto subs = app.get_subcommands();
    if (!subs.empty()) {
      o.command = subs.front()->get_name();
    } else if (o.command.empty()) {
      config_error("no command: pass a subcommand or a config with one");
    } else {
      bool known = false;
      for (const auto& [name, desc] : kCommands) {
        if (o.command == name) known = true;
      }
      if (!known) config_error("unknown command '" + o.command + "'");
    }

    if (o.format != "json" && o.format != "csv") {
      config_error("--format must be json or csv");
    }
    if (o.samples < 1) config_error("--samples must be positive");
    if (o.threads < 0) config_error("--threads must be non-negative");

    if (o.radii.empty()) {
      o.radii = o.command == "bound"
                    ? std::vector<double>{std::exp(-1.0), std::exp(-2.0),
                                          std::exp(-3.0)}
                    : std::vector<double>{0.5};
    }
    if (o.depths.empty()) {
      if (o.command == "lelong") {
        o.depths = {4.0, 9.0, 16.0};
      } else if (o.command == "separation") {
        o.depths = {2.0, 4.0, 8.0};
      } else {
        o.depths = {4.0};
      }
    }
    if (o.command == "separation" && o.fn.empty()) o.fn = "separated";

    if (o.threads > 0) {
      ::setenv("PSH_LAB_THREADS", std::to_string(o.threads).c_str(), 1);
    }

    pshlab::Report report;
    report.config = echo_config(o);
    pshlab::Stopwatch watch;
    if (o.command == "frames-selftest") {
      run_frames_selftest(o, report);
    } else if (o.command == "psh-check") {
      run_psh_check(o, report);
    } else if (o.command == "mass") {
      run_mass(o, report);
    } else if (o.command == "bound") {
      run_bound(o, report);
    } else if (o.command == "pohozaev") {
      run_pohozaev(o, report);
    } else if (o.command == "lelong") {
      run_lelong(o, report);
    } else if (o.command == "separation") {
      run_separation(o, report);
    } else if (o.command == "mollify-check") {
      run_mollify_check(o, report);
    } else {
      run_reproduce_all(o, report);
    }
    report.timing_ms = watch.elapsed_ms();

    const std::string text = pshlab::render_report(report, o.format);
    if (o.output.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      std::ofstream out(o.output);
      if (!out) config_error("--output: cannot open '" + o.output + "'");
      out << text;
      std::size_t failed = 0;
      for (const auto& c : report.checks) {
        if (!c.pass) ++failed;
      }
      std::fprintf(stderr, "wrote %s (%zu checks, %zu failed)\n",
                   o.output.c_str(), report.checks.size(), failed);
    }
    return report.all_pass() ? 0 : 1;
  } catch (const pshlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const pshlab::BadParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const pshlab::UnknownEntry& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const pshlab::NotSeparatedForm& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const pshlab::Error& e) {
    std::fprintf(stderr, "check failed to run: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
