#pragma once

/// \file lelong.hpp
/// \brief Lelong-type functionals: sphere means and maxima, the number
///        itself via ladder slopes, directional ladders M_A / N_A, the
///        radial Lipschitz ladder L_A, circle symmetrization, steep radial
///        probe families, and the separated-form bound verifier.
///
/// Conventions.  Depth parameters A > 0 refer to the log-radius t = -A,
/// i.e. the sphere of radius e^{-A}.  All suprema are maxima over dense
/// deterministic grids and are therefore certified lower bounds of the
/// true suprema; tests account for that one-sidedness.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/jet.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

/// Spherical mean S_u(r) (uniform probability measure on S_r) and the
/// sphere maximum V_u(r) (grid maximum over the base nodes plus one
/// refined pass).
struct SphereStats {
  double S_u = 0.0;
  double V_u = 0.0;
};

inline SphereStats sphere_stats(const ScalarField& field, double r,
                                const QuadratureSpec& spec = {}) {
  if (!(r > 0.0) || !(r < 1.0)) {
    throw BadParams("sphere_stats: r must lie in (0, 1)");
  }
  SphereStats out;
  // integrate_sphere is against dtheta wedge omega_FS (total 4 pi^2), which
  // is proportional to the round area element, so dividing by the total
  // mass gives the uniform-probability mean.
  out.S_u = integrate_sphere(
                [&field](const HopfPoint& p) { return field.eval(embed(p)); },
                r, spec) /
            (4.0 * kPi * kPi);

  double vmax = -std::numeric_limits<double>::infinity();
  QuadratureSpec dense = spec;
  dense.n_theta *= 2;
  dense.n_eta *= 2;
  dense.n_phi *= 2;
  for (const QuadratureSpec& s : {spec, dense}) {
    for (const SphereNode& node : sphere_nodes(r, s)) {
      vmax = std::max(vmax, field.eval(embed(node.p)));
    }
  }
  out.V_u = vmax;
  return out;
}

/// Ladder slopes of S_u in t between consecutive depths, with the last
/// slope and the intercept of a least-squares fit of slope against
/// 1/sqrt(A) (the fitted A -> infinity limit).
struct LelongNumber {
  std::vector<double> slopes;  ///< one per consecutive ladder pair
  double nu_last = 0.0;
  double nu_fit = 0.0;
};

inline LelongNumber lelong_number(const ScalarField& field,
                                  const std::vector<double>& A_ladder,
                                  const QuadratureSpec& spec = {}) {
  if (A_ladder.size() < 4) {
    throw BadParams("lelong_number: ladder needs at least 4 depths");
  }
  for (std::size_t i = 0; i < A_ladder.size(); ++i) {
    if (!(A_ladder[i] > 0.0)) {
      throw BadParams("lelong_number: depths must be positive");
    }
    if (i > 0 && !(A_ladder[i] > A_ladder[i - 1])) {
      throw BadParams("lelong_number: depths must be strictly increasing");
    }
  }

  std::vector<double> means(A_ladder.size());
  for (std::size_t i = 0; i < A_ladder.size(); ++i) {
    means[i] = sphere_stats(field, std::exp(-A_ladder[i]), spec).S_u;
  }

  LelongNumber out;
  out.slopes.reserve(A_ladder.size() - 1);
  for (std::size_t i = 0; i + 1 < A_ladder.size(); ++i) {
    out.slopes.push_back((means[i] - means[i + 1]) /
                         (A_ladder[i + 1] - A_ladder[i]));
  }
  // Convexity of S_u in t makes the slope non-increasing as A grows; a
  // clear increase signals a sampling failure.
  for (std::size_t i = 0; i + 1 < out.slopes.size(); ++i) {
    const double tol = 1e-6 * std::max(1.0, std::abs(out.slopes[i]));
    if (out.slopes[i + 1] > out.slopes[i] + tol) {
      throw NonMonotone("lelong_number: ladder slopes increase with depth");
    }
  }
  out.nu_last = out.slopes.back();

  // Least squares of slope against x = 1/sqrt(midpoint A); the intercept
  // estimates the deep limit for slopes decaying like A^{-1/2} and is
  // exact for constant slopes.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(out.slopes.size());
  for (std::size_t i = 0; i < out.slopes.size(); ++i) {
    const double mid = 0.5 * (A_ladder[i] + A_ladder[i + 1]);
    const double x = 1.0 / std::sqrt(mid);
    sx += x;
    sy += out.slopes[i];
    sxx += x * x;
    sxy += x * out.slopes[i];
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-14) {
    out.nu_fit = sy / m;
  } else {
    const double a = (m * sxy - sx * sy) / denom;
    out.nu_fit = (sy - a * sx) / m;
  }
  return out;
}

/// Directional ladder at depth A: M_A is the maximum over the CP^1 grid of
/// the forward t-difference of the fiber-averaged restriction at t = -A;
/// N_A is the maximum over the same grid of u's fiber maximum divided by
/// -A.  Both are grid lower bounds of the true suprema.
struct DirectionalLadder {
  double M_A = 0.0;
  double N_A = 0.0;
};

inline DirectionalLadder directional_ladder(const ScalarField& field,
                                            double A,
                                            const QuadratureSpec& spec = {},
                                            double delta = 1e-3) {
  if (!(A > 0.0)) throw BadParams("directional_ladder: A must be positive");
  if (!(delta > 0.0)) {
    throw BadParams("directional_ladder: delta must be positive");
  }
  const Rule1D th = theta_rule(spec);
  const double total_theta = 4.0 * kPi;
  const double r0 = std::exp(-A);
  const double r1 = std::exp(-A + delta);

  double m_best = -std::numeric_limits<double>::infinity();
  double n_best = -std::numeric_limits<double>::infinity();
  for (const Cp1Node& zn : cp1_nodes(spec)) {
    double avg0 = 0.0, avg1 = 0.0;
    double fiber_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < th.nodes.size(); ++i) {
      const double u0 = field.eval(
          embed(HopfPoint{r0, th.nodes[i], zn.zeta, Chart::Principal}));
      const double u1 = field.eval(
          embed(HopfPoint{r1, th.nodes[i], zn.zeta, Chart::Principal}));
      avg0 += u0 * th.weights[i];
      avg1 += u1 * th.weights[i];
      fiber_max = std::max(fiber_max, u0);
    }
    avg0 /= total_theta;
    avg1 /= total_theta;
    m_best = std::max(m_best, (avg1 - avg0) / delta);
    n_best = std::max(n_best, fiber_max / (-A));
  }
  return {m_best, n_best};
}

/// L_A: maximum of |r u_r| over a deterministic sample of the closed ball
/// of radius e^{-A} minus the tiny inner shell.  The boundary sphere is
/// included exactly.  Fields with closed-form jets use them; others use a
/// central log-radial difference of the evaluation.  extra_points inside
/// the ball are merged into the sample (useful for families that chase a
/// large-derivative locus).
inline double lipschitz_ladder(const ScalarField& field, double A,
                               const QuadratureSpec& spec = {},
                               const std::vector<CxPoint>& extra_points = {},
                               double fd_h = 1e-4) {
  if (!(A > 0.0)) throw BadParams("lipschitz_ladder: A must be positive");
  if (!(fd_h > 0.0)) throw BadParams("lipschitz_ladder: fd_h must be positive");
  const double R = std::exp(-A);

  const auto radial_slope = [&field, fd_h](const CxPoint& z) {
    if (const auto jet = field.closed_form_jet(z)) {
      return radial_log_derivative(*jet, z);
    }
    const double up =
        field.eval(CxPoint{z.z0 * std::exp(fd_h), z.z1 * std::exp(fd_h)});
    const double dn =
        field.eval(CxPoint{z.z0 * std::exp(-fd_h), z.z1 * std::exp(-fd_h)});
    return (up - dn) / (2.0 * fd_h);
  };

  const Rule1D rad = radial_rule(spec, spec.r_min_factor * R, R);
  std::vector<double> radii = rad.nodes;
  radii.push_back(R);  // the boundary shell, where many suprema live

  const Rule1D th = theta_rule(spec);
  const auto zg = cp1_nodes(spec);
  double best = 0.0;
  for (double r : radii) {
    for (const Cp1Node& zn : zg) {
      for (double theta : th.nodes) {
        const CxPoint z = embed(HopfPoint{r, theta, zn.zeta, Chart::Principal});
        best = std::max(best, std::abs(radial_slope(z)));
      }
    }
  }
  for (const CxPoint& z : extra_points) {
    if (z.abs() <= R * (1.0 + 1e-12)) {
      best = std::max(best, std::abs(radial_slope(z)));
    }
  }
  return best;
}

/// Circle average u_s(z) = mean over alpha of u(e^{i alpha} z) and the
/// alternating part v = u - u_s, as fields.  Jets of the average are the
/// averaged rotated jets (first derivatives pick up e^{i alpha}, the
/// holomorphic Hessian e^{2 i alpha}, the mixed Hessian nothing); they are
/// provided whenever the base field provides jets at every rotated point.
struct SymmetrizedPair {
  FieldPtr u_s;
  FieldPtr v;
};

namespace detail {

inline std::vector<double> circle_nodes(int n) {
  std::vector<double> alphas(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    alphas[static_cast<std::size_t>(i)] =
        2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  return alphas;
}

}  // namespace detail

inline SymmetrizedPair symmetrize(FieldPtr field, int n_theta = 64) {
  if (!field) throw BadParams("symmetrize: null field");
  if (n_theta < 8) throw BadParams("symmetrize: need at least 8 circle nodes");
  const auto alphas = detail::circle_nodes(n_theta);
  const double inv_n = 1.0 / static_cast<double>(n_theta);

  const auto avg_eval = [field, alphas, inv_n](const CxPoint& p) {
    double acc = 0.0;
    for (double a : alphas) {
      const cx rot = std::polar(1.0, a);
      acc += field->eval(CxPoint{rot * p.z0, rot * p.z1});
    }
    return acc * inv_n;
  };
  const auto avg_jet =
      [field, alphas, inv_n](const CxPoint& p) -> std::optional<Jet2> {
    Jet2 acc;
    for (double a : alphas) {
      const cx rot = std::polar(1.0, a);
      const auto jet = field->closed_form_jet(CxPoint{rot * p.z0, rot * p.z1});
      if (!jet) return std::nullopt;
      const cx rot2 = rot * rot;
      acc.u += jet->u;
      acc.du[0] += rot * jet->du[0];
      acc.du[1] += rot * jet->du[1];
      acc.hessH.a00 += jet->hessH.a00;
      acc.hessH.a11 += jet->hessH.a11;
      acc.hessH.a01 += jet->hessH.a01;
      acc.hessHol.a00 += rot2 * jet->hessHol.a00;
      acc.hessHol.a01 += rot2 * jet->hessHol.a01;
      acc.hessHol.a11 += rot2 * jet->hessHol.a11;
    }
    acc.u *= inv_n;
    acc.du[0] *= inv_n;
    acc.du[1] *= inv_n;
    acc.hessH.a00 *= inv_n;
    acc.hessH.a11 *= inv_n;
    acc.hessH.a01 *= inv_n;
    acc.hessHol.a00 *= inv_n;
    acc.hessHol.a01 *= inv_n;
    acc.hessHol.a11 *= inv_n;
    return acc;
  };

  FieldInfo s_info = field->info();
  s_info.name += "_s";
  s_info.s1_invariant = true;
  FieldPtr u_s = std::make_shared<LambdaField>(s_info, avg_eval, avg_jet);

  FieldInfo v_info = field->info();
  v_info.name += "_alt";
  v_info.s1_invariant = false;
  v_info.psh_claimed = false;  // the alternating part alone need not be psh
  FieldPtr v = std::make_shared<LambdaField>(
      v_info,
      [field, avg_eval](const CxPoint& p) {
        return field->eval(p) - avg_eval(p);
      },
      [field, avg_jet](const CxPoint& p) -> std::optional<Jet2> {
        const auto base = field->closed_form_jet(p);
        const auto avg = avg_jet(p);
        if (!base || !avg) return std::nullopt;
        Jet2 out = *base;
        out.u -= avg->u;
        out.du[0] -= avg->du[0];
        out.du[1] -= avg->du[1];
        out.hessH.a00 -= avg->hessH.a00;
        out.hessH.a11 -= avg->hessH.a11;
        out.hessH.a01 -= avg->hessH.a01;
        out.hessHol.a00 -= avg->hessHol.a00;
        out.hessHol.a01 -= avg->hessHol.a01;
        out.hessHol.a11 -= avg->hessHol.a11;
        return out;
      });
  return {u_s, v};
}

/// Steep radial probe family for the degree-2 homogeneous symmetric model:
/// real points z = (r, r xi / w, 0-phases) with xi solving
/// xi (1 + xi^2)^{1/2} = (1 - 1/k) r, at the admissible radius
/// r_k = min(0.05, (0.1 / k^3)^{1/4}).  Along this family
/// r u_r = (2 + (k - 1)/(1 + k^2 xi^4)) / 2, which grows like (k + 1)/2.
struct SteepProbe {
  int k = 0;
  double r = 0.0;
  CxPoint z;
  double predicted_rur = 0.0;
};

inline std::vector<SteepProbe> steep_radial_probes(const std::vector<int>& ks,
                                                   int n = 2) {
  if (n != 2) {
    throw BadParams("steep_radial_probes: the probe family is implemented "
                    "for the quadratic model (n = 2)");
  }
  std::vector<SteepProbe> out;
  out.reserve(ks.size());
  for (int k : ks) {
    if (k < 2) throw BadParams("steep_radial_probes: k must be at least 2");
    const double kd = static_cast<double>(k);
    const double r = std::min(0.05, std::pow(0.1 / (kd * kd * kd), 0.25));
    const double target = (1.0 - 1.0 / kd) * r;
    double xi = target;  // Newton for xi sqrt(1 + xi^2) = target
    for (int it = 0; it < 50; ++it) {
      const double w = std::sqrt(1.0 + xi * xi);
      const double f = xi * w - target;
      const double fp = w + xi * xi / w;
      const double step = f / fp;
      xi -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = std::sqrt(1.0 + xi * xi);
    SteepProbe probe;
    probe.k = k;
    probe.r = r;
    probe.z = CxPoint{cx(r / w, 0.0), cx(r * xi / w, 0.0)};
    const double expr = (kd - 1.0) / (1.0 + kd * kd * std::pow(xi, 4.0));
    probe.predicted_rur = 0.5 * (2.0 + expr);
    out.push_back(probe);
  }
  return out;
}

/// Full ladder record over a depth list.  S_slope and V_slope are local
/// forward differences in t at each depth (step delta); nu comes from the
/// consecutive-slope fit when the ladder is deep enough, else the last
/// local slope; lambda and kappa are the deepest M_A and L_A values (the
/// ladders themselves are the honest computable objects).
struct LelongLadder {
  std::vector<double> A_values;
  std::vector<double> S_slope;
  std::vector<double> V_slope;
  std::vector<double> M_A;
  std::vector<double> N_A;
  std::vector<double> L_A;
  double nu_estimate = 0.0;
  double lambda_estimate = 0.0;
  double kappa_estimate = 0.0;
};

inline LelongLadder lelong_ladder(const ScalarField& field,
                                  const std::vector<double>& A_values,
                                  const QuadratureSpec& spec = {},
                                  double delta = 1e-3) {
  if (A_values.empty()) throw BadParams("lelong_ladder: empty depth list");
  LelongLadder out;
  out.A_values = A_values;
  for (double A : A_values) {
    if (!(A > 0.0)) throw BadParams("lelong_ladder: depths must be positive");
    const double r0 = std::exp(-A);
    const double r1 = std::exp(-A + delta);
    const SphereStats st0 = sphere_stats(field, r0, spec);
    const SphereStats st1 = sphere_stats(field, r1, spec);
    out.S_slope.push_back((st1.S_u - st0.S_u) / delta);
    out.V_slope.push_back((st1.V_u - st0.V_u) / delta);
    const DirectionalLadder dl = directional_ladder(field, A, spec, delta);
    out.M_A.push_back(dl.M_A);
    out.N_A.push_back(dl.N_A);
    out.L_A.push_back(lipschitz_ladder(field, A, spec));
  }
  if (A_values.size() >= 4) {
    out.nu_estimate = lelong_number(field, A_values, spec).nu_fit;
  } else {
    out.nu_estimate = out.S_slope.back();
  }
  out.lambda_estimate = out.M_A.back();
  out.kappa_estimate = out.L_A.back();
  return out;
}

/// Separated-form verifier: for entries carrying the normal form
/// u = us log r + f(theta') v, checks the two-sided derivative bound
///   -max{M_A/K, N_A/k}  <=  r d_r v  <=  max{N_A/K, M_A/k}
/// at fiber/base samples of the sphere r = e^{-A}, for each depth, where
/// K = sup f > 0 and k = -inf f > 0 and f has zero circle mean.
struct SeparationReport {
  double K = 0.0;
  double k = 0.0;
  std::vector<double> A_values;
  std::vector<double> bound_lo;   ///< per depth
  std::vector<double> bound_hi;   ///< per depth
  std::vector<double> rdr_min;    ///< sampled min of r d_r v per depth
  std::vector<double> rdr_max;    ///< sampled max of r d_r v per depth
  bool satisfied = false;
};

inline SeparationReport verify_separation(const CatalogEntry& entry,
                                          const std::vector<double>& A_ladder,
                                          const QuadratureSpec& spec = {},
                                          double tol = 1e-9) {
  if (!entry.expected.separated) {
    throw NotSeparatedForm("verify_separation: entry '" + entry.name +
                           "' does not carry a separated structure");
  }
  const SeparatedStructure& sep = *entry.expected.separated;
  if (!(sep.sup_f > 0.0) || !(sep.neg_inf_f > 0.0)) {
    throw NotSeparatedForm("verify_separation: angular factor must take "
                           "both signs (trivial separation rejected)");
  }
  {
    double mean = 0.0;
    const int n = 256;
    for (double a : detail::circle_nodes(n)) mean += sep.f(a);
    mean /= static_cast<double>(n);
    if (std::abs(mean) > 1e-8) {
      throw NotSeparatedForm("verify_separation: angular factor must have "
                             "zero circle mean");
    }
  }
  if (A_ladder.empty()) {
    throw BadParams("verify_separation: empty depth ladder");
  }

  SeparationReport report;
  report.K = sep.sup_f;
  report.k = sep.neg_inf_f;
  report.A_values = A_ladder;
  report.satisfied = true;

  const Rule1D th = theta_rule(spec);
  const auto zg = cp1_nodes(spec);
  for (double A : A_ladder) {
    if (!(A > 0.0)) throw BadParams("verify_separation: depths must be positive");
    const DirectionalLadder dl = directional_ladder(*entry.field, A, spec);
    const double lo =
        -std::max(dl.M_A / report.K, dl.N_A / report.k);
    const double hi = std::max(dl.N_A / report.K, dl.M_A / report.k);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    const double r = std::exp(-A);
    for (const Cp1Node& zn : zg) {
      for (double theta : th.nodes) {
        const HopfPoint q{r, theta, zn.zeta, Chart::Simple};
        const double val = sep.r_dr_v(q);
        mn = std::min(mn, val);
        mx = std::max(mx, val);
      }
    }
    report.bound_lo.push_back(lo);
    report.bound_hi.push_back(hi);
    report.rdr_min.push_back(mn);
    report.rdr_max.push_back(mx);
    if (mn < lo - tol || mx > hi + tol) report.satisfied = false;
  }
  return report;
}

}  // namespace pshlab
