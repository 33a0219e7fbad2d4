#pragma once

/// \file catalog.hpp
/// \brief Named laboratory fields with hand-differentiated jets and
/// recorded expected behaviour (density of the singularity, residual mass,
/// restriction slopes, separated structure).
///
/// Every entry lives on the punctured unit ball of C^2.  Entries:
///
///   quad        |z|^2/2 — smooth strictly plurisubharmonic reference.
///   log_norm    log|z| — the fundamental cone potential; unit point mass.
///   half_log    -(-log|z^0|^2)^{1/2} — zero density and zero residual
///               mass but unbounded radial slope near the z^0 = 0 divisor.
///   one_n_symm  (1/2n) log(|z^1 - (z^0)^n|^2 + |z^1|^{2n}) — density 1/n
///               with full residual mass; Lipschitz bounds fail.
///   osc_1d      sum_k k^{-2} log(|z^0 - 1/k|^2 + eps_k) — smooth,
///               one-variable, oscillating; all masses vanish.
///   max_green   max{osc_1d(z^0), log|z^1|} — non-smooth model for
///               mollification; masses reachable only by smoothing.
///   sym_plus_re log|z| + Re z^1 — cone potential plus a pluriharmonic
///               alternating part; in the simple chart it reads
///               log r + (r/w) cos(theta').
///   separated   us * log|z| + cos(theta') * v — the separated normal form;
///               v = r/w reproduces sym_plus_re, v = log r gives the
///               slope-two variant.

#include <cfloat>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/field.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

/// The separated normal form u = us * log r + f(theta') v carried as
/// closures over simple-chart points, with the positive bounds of f.
struct SeparatedStructure {
  std::function<double(double)> f;                ///< angular factor
  std::function<double(const HopfPoint&)> v;      ///< separated factor
  std::function<double(const HopfPoint&)> r_dr_v; ///< r d_r of v
  double sup_f = 1.0;      ///< K = sup f (must be positive)
  double neg_inf_f = 1.0;  ///< k = -inf f (must be positive)
  double us_scale = 1.0;   ///< coefficient of log r
};

/// Recorded expectations used by tests and reports.  m_slope is a recorded
/// reference for the restricted-slope ladder M_A; entries without a
/// recorded form leave it empty.
struct ExpectedBehavior {
  std::optional<double> nu;
  std::optional<double> tau;
  std::function<double(double)> m_slope;
  bool lipschitz_fails = false;
  std::optional<SeparatedStructure> separated;
};

/// A catalog entry: name, parameters it was built with, the field, and its
/// recorded expectations.
struct CatalogEntry {
  std::string name;
  std::map<std::string, double> params;
  FieldPtr field;
  ExpectedBehavior expected;
};

namespace detail {

/// Closed-form jet of log|z|.
inline Jet2 log_norm_jet(const CxPoint& p) {
  const double q = p.abs2();
  const cx zb0 = std::conj(p.z0);
  const cx zb1 = std::conj(p.z1);
  Jet2 jet;
  jet.u = 0.5 * std::log(q);
  jet.du = {zb0 / (2.0 * q), zb1 / (2.0 * q)};
  jet.hessH.a00 = 1.0 / (2.0 * q) - std::norm(p.z0) / (2.0 * q * q);
  jet.hessH.a11 = 1.0 / (2.0 * q) - std::norm(p.z1) / (2.0 * q * q);
  jet.hessH.a01 = -zb0 * p.z1 / (2.0 * q * q);
  jet.hessHol.a00 = -zb0 * zb0 / (2.0 * q * q);
  jet.hessHol.a01 = -zb0 * zb1 / (2.0 * q * q);
  jet.hessHol.a11 = -zb1 * zb1 / (2.0 * q * q);
  return jet;
}

/// The one-variable oscillating sum f(z) = sum_{k=1..K} k^{-2}
/// log(|z - 1/k|^2 + eps_k) with eps_k = max(exp(-k^5), DBL_MIN): smooth
/// (eps_k > 0) and subharmonic, with ever-sharper wells along 1/k -> 0.
struct OscSum {
  struct Term {
    double center;
    double weight;
    double eps;
  };
  std::vector<Term> terms;

  explicit OscSum(int K) {
    if (K < 1) throw BadParams("osc_1d: K must be at least 1");
    terms.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
      Term t;
      t.center = 1.0 / static_cast<double>(k);
      t.weight = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
      t.eps = std::max(std::exp(-std::pow(static_cast<double>(k), 5.0)),
                       DBL_MIN);
      terms.push_back(t);
    }
  }

  double eval(cx z) const {
    double s = 0.0;
    for (const Term& t : terms) {
      const cx w = z - t.center;
      s += t.weight * std::log(std::norm(w) + t.eps);
    }
    return s;
  }

  /// First/second derivatives in the single variable: with w = z - 1/k and
  /// q = |w|^2 + eps, each term contributes weight * (wbar/q, eps/q^2,
  /// -wbar^2/q^2) to (f_z, f_{z zbar}, f_{zz}).
  void jet(cx z, cx& fz, double& fzzb, cx& fzz) const {
    fz = 0.0;
    fzzb = 0.0;
    fzz = 0.0;
    for (const Term& t : terms) {
      const cx w = z - t.center;
      const double q = std::norm(w) + t.eps;
      const cx wb = std::conj(w);
      fz += t.weight * wb / q;
      fzzb += t.weight * t.eps / (q * q);
      fzz += t.weight * (-wb * wb / (q * q));
    }
  }
};

}  // namespace detail

/// Names accepted by make_entry.
inline std::vector<std::string> catalog_names() {
  return {"quad",   "log_norm",  "half_log",    "one_n_symm",
          "osc_1d", "max_green", "sym_plus_re", "separated"};
}

/// Builds a catalog entry by name.  Parameters: one_n_symm takes integer
/// n >= 2 (default 2); osc_1d and max_green take K >= 1 (default 8);
/// separated takes us_scale (default 1) and the flag v_log (default 0:
/// v = r/w; 1: v = log r).  Unknown names raise UnknownEntry; invalid
/// parameters raise BadParams.
inline CatalogEntry make_entry(const std::string& name,
                               const std::map<std::string, double>& params = {}) {
  const auto param = [&params](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };

  CatalogEntry entry;
  entry.name = name;
  entry.params = params;

  if (name == "quad") {
    FieldInfo info;
    info.name = "quad";
    info.s1_invariant = true;
    info.nu = 0.0;
    info.tau = 0.0;
    entry.field = std::make_shared<LambdaField>(
        info, [](const CxPoint& p) { return 0.5 * p.abs2(); },
        [](const CxPoint& p) -> std::optional<Jet2> {
          Jet2 jet;
          jet.u = 0.5 * p.abs2();
          jet.du = {0.5 * std::conj(p.z0), 0.5 * std::conj(p.z1)};
          jet.hessH.a00 = 0.5;
          jet.hessH.a11 = 0.5;
          return jet;
        });
    entry.expected.nu = 0.0;
    entry.expected.tau = 0.0;
    // r u_r = r^2, so the restricted slope at depth A is e^{-2A}.
    entry.expected.m_slope = [](double A) { return std::exp(-2.0 * A); };
    return entry;
  }

  if (name == "log_norm") {
    FieldInfo info;
    info.name = "log_norm";
    info.s1_invariant = true;
    info.nu = 1.0;
    info.tau = 1.0;
    info.kappa = 1.0;
    entry.field = std::make_shared<LambdaField>(
        info, [](const CxPoint& p) { return std::log(p.abs()); },
        [](const CxPoint& p) -> std::optional<Jet2> {
          return detail::log_norm_jet(p);
        });
    entry.expected.nu = 1.0;
    entry.expected.tau = 1.0;
    entry.expected.m_slope = [](double) { return 1.0; };
    return entry;
  }

  if (name == "half_log") {
    FieldInfo info;
    info.name = "half_log";
    info.s1_invariant = true;
    info.smooth_off_origin = false;  // singular along the z^0 = 0 divisor
    info.nu = 0.0;
    info.tau = 0.0;
    entry.field = std::make_shared<LambdaField>(
        info,
        [](const CxPoint& p) {
          // u = -sqrt(s), s = -2 log|z^0|; -inf on the divisor, nan outside
          // the unit ball (callers guard the domain).
          const double s = -2.0 * std::log(std::abs(p.z0));
          return -std::sqrt(s);
        },
        [](const CxPoint& p) -> std::optional<Jet2> {
          if (p.z0 == cx(0.0, 0.0)) return std::nullopt;
          const double s = -2.0 * std::log(std::abs(p.z0));
          if (!(s > 0.0)) return std::nullopt;
          const double rs = std::sqrt(s);
          const cx z0 = p.z0;
          Jet2 jet;
          jet.u = -rs;
          jet.du = {1.0 / (2.0 * rs * z0), cx(0.0, 0.0)};
          jet.hessH.a00 = 0.25 / (rs * s * std::norm(z0));
          jet.hessHol.a00 =
              0.25 / (rs * s * z0 * z0) - 0.5 / (rs * z0 * z0);
          return jet;
        });
    entry.expected.nu = 0.0;
    entry.expected.tau = 0.0;
    // Recorded reference slope 1/sqrt(A).  The measured ladder converges
    // to 1/sqrt(2A) — see the README note on this reference value.
    entry.expected.m_slope = [](double A) { return 1.0 / std::sqrt(A); };
    return entry;
  }

  if (name == "one_n_symm") {
    const double n_raw = param("n", 2.0);
    const double n_round = std::round(n_raw);
    if (std::abs(n_raw - n_round) > 1e-9 || n_round < 2.0) {
      throw BadParams("one_n_symm: n must be an integer >= 2");
    }
    const int n = static_cast<int>(n_round);
    FieldInfo info;
    info.name = "one_n_symm";
    info.nu = 1.0 / n;
    info.tau = 1.0;
    info.lipschitz_fails = true;
    const auto g_parts = [n](const CxPoint& p) {
      const cx z0n = std::pow(p.z0, n);
      const cx P = p.z1 - z0n;
      const double g = std::norm(P) + std::pow(std::norm(p.z1), n);
      return std::pair<cx, double>(P, g);
    };
    entry.field = std::make_shared<LambdaField>(
        info,
        [g_parts, n](const CxPoint& p) {
          return std::log(g_parts(p).second) / (2.0 * n);
        },
        [n](const CxPoint& p) -> std::optional<Jet2> {
          const cx z0 = p.z0, z1 = p.z1;
          const double nd = static_cast<double>(n);
          const cx z0_nm1 = std::pow(z0, n - 1);
          const cx z0_n = z0_nm1 * z0;
          const cx P = z1 - z0_n;
          const cx Pb = std::conj(P);
          const double az1_2 = std::norm(z1);
          const double az1_2nm2 = std::pow(az1_2, n - 1);
          const cx z1b_n = std::pow(std::conj(z1), n);
          const double g = std::norm(P) + az1_2nm2 * az1_2;
          if (!(g > 0.0)) return std::nullopt;

          const cx g0 = -nd * z0_nm1 * Pb;
          const cx g1 = Pb + nd * std::conj(z1) * az1_2nm2;
          const double g00b = nd * nd * std::pow(std::norm(z0), n - 1);
          const cx g01b = -nd * z0_nm1;  // d_{z^0} d_{zbar^1} g
          const double g11b = 1.0 + nd * nd * az1_2nm2;
          const cx g00 = -nd * (nd - 1.0) * std::pow(z0, n - 2) * Pb;
          const cx g11 = nd * (nd - 1.0) * std::pow(z1, n - 2) * z1b_n;

          const double c = 1.0 / (2.0 * nd);
          Jet2 jet;
          jet.u = c * std::log(g);
          jet.du = {c * g0 / g, c * g1 / g};
          jet.hessH.a00 = c * (g00b / g - std::norm(g0) / (g * g));
          jet.hessH.a11 = c * (g11b / g - std::norm(g1) / (g * g));
          jet.hessH.a01 =
              c * (g01b / g - g0 * std::conj(g1) / (g * g));
          jet.hessHol.a00 = c * (g00 / g - g0 * g0 / (g * g));
          jet.hessHol.a01 = c * (-g0 * g1 / (g * g));
          jet.hessHol.a11 = c * (g11 / g - g1 * g1 / (g * g));
          return jet;
        });
    entry.expected.nu = 1.0 / n;
    entry.expected.tau = 1.0;
    entry.expected.lipschitz_fails = true;
    return entry;
  }

  if (name == "osc_1d" || name == "max_green") {
    const double k_raw = param("K", 8.0);
    if (std::abs(k_raw - std::round(k_raw)) > 1e-9 || k_raw < 1.0) {
      throw BadParams(name + ": K must be a positive integer");
    }
    const auto osc = std::make_shared<detail::OscSum>(
        static_cast<int>(std::round(k_raw)));

    if (name == "osc_1d") {
      FieldInfo info;
      info.name = "osc_1d";
      info.nu = 0.0;
      info.tau = 0.0;
      entry.field = std::make_shared<LambdaField>(
          info, [osc](const CxPoint& p) { return osc->eval(p.z0); },
          [osc](const CxPoint& p) -> std::optional<Jet2> {
            cx fz, fzz;
            double fzzb;
            osc->jet(p.z0, fz, fzzb, fzz);
            Jet2 jet;
            jet.u = osc->eval(p.z0);
            jet.du = {fz, cx(0.0, 0.0)};
            jet.hessH.a00 = fzzb;
            jet.hessHol.a00 = fzz;
            return jet;
          });
      entry.expected.nu = 0.0;
      entry.expected.tau = 0.0;
      return entry;
    }

    FieldInfo info;
    info.name = "max_green";
    info.smooth_off_origin = false;  // a max of two smooth potentials
    info.nu = 0.0;
    info.tau = 0.0;
    entry.field = std::make_shared<LambdaField>(
        info, [osc](const CxPoint& p) {
          // Ties resolve to the one-variable branch.
          const double a = osc->eval(p.z0);
          const double b = std::log(std::abs(p.z1));
          return a >= b ? a : b;
        });
    entry.expected.nu = 0.0;
    entry.expected.tau = 0.0;
    return entry;
  }

  if (name == "sym_plus_re" || name == "separated") {
    const double us = param("us_scale", 1.0);
    const bool v_log = param("v_log", 0.0) != 0.0;
    if (name == "sym_plus_re" && (us != 1.0 || v_log)) {
      throw BadParams("sym_plus_re: takes no parameters");
    }

    SeparatedStructure sep;
    sep.f = [](double theta_s) { return std::cos(theta_s); };
    sep.sup_f = 1.0;
    sep.neg_inf_f = 1.0;
    sep.us_scale = us;
    if (v_log) {
      sep.v = [](const HopfPoint& q) { return std::log(q.r); };
      sep.r_dr_v = [](const HopfPoint&) { return 1.0; };
    } else {
      sep.v = [](const HopfPoint& q) {
        return q.r / std::sqrt(1.0 + std::norm(q.zeta));
      };
      sep.r_dr_v = [](const HopfPoint& q) {
        return q.r / std::sqrt(1.0 + std::norm(q.zeta));
      };
    }

    FieldInfo info;
    info.name = name;
    if (!v_log) {
      // us log|z| + Re z^1 (in the simple chart Re z^1 = (r/w) cos theta').
      info.nu = us;
      info.tau = us * us;
      entry.field = std::make_shared<LambdaField>(
          info,
          [us](const CxPoint& p) {
            return us * std::log(p.abs()) + p.z1.real();
          },
          [us](const CxPoint& p) -> std::optional<Jet2> {
            Jet2 jet = detail::log_norm_jet(p);
            jet.u *= us;
            for (auto& d : jet.du) d *= us;
            jet.hessH.a00 *= us;
            jet.hessH.a11 *= us;
            jet.hessH.a01 *= us;
            jet.hessHol.a00 *= us;
            jet.hessHol.a01 *= us;
            jet.hessHol.a11 *= us;
            jet.u += p.z1.real();
            jet.du[1] += 0.5;
            return jet;
          });
      entry.expected.nu = us;
      entry.expected.tau = us * us;
      entry.expected.m_slope = [us](double) { return us; };
    } else {
      // (us + cos theta') log r, singular along the z^1 = 0 divisor where
      // theta' degenerates; the angular factor is set to 0 there.
      info.smooth_off_origin = false;
      info.nu = us - 1.0;
      entry.field = std::make_shared<LambdaField>(info, [us](const CxPoint& p) {
        const double az1 = std::abs(p.z1);
        const double cos_ts = az1 > 0.0 ? p.z1.real() / az1 : 0.0;
        return (us + cos_ts) * std::log(p.abs());
      });
      entry.expected.nu = us - 1.0;
      entry.expected.m_slope = [us](double) { return us; };
    }
    entry.expected.separated = sep;
    return entry;
  }

  throw UnknownEntry("make_entry: no catalog entry named '" + name + "'");
}

/// The entries whose fields are smooth off the origin and claimed
/// plurisubharmonic — the set mass-route comparisons quantify over.
inline std::vector<CatalogEntry> smooth_psh_entries() {
  std::vector<CatalogEntry> out;
  for (const std::string& name : catalog_names()) {
    CatalogEntry entry = make_entry(name);
    if (entry.field->info().smooth_off_origin &&
        entry.field->info().psh_claimed) {
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace pshlab
