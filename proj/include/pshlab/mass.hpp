#pragma once

/// \file mass.hpp
/// \brief Monge-Ampere mass of a plurisubharmonic field near the origin by
///        three routes (volume density, boundary 3-form, fiber-integrated
///        decomposition), the Pohozaev identity on complex lines, and the
///        mass/derivative comparison bounds.
///
/// Conventions.  With d^c = (i/2)(dbar - d) the wedge square satisfies
/// (dd^c u)^2 = 8 det(u_{j kbar}) dV in C^2, and the normalized residual
/// mass at the origin is tau = (boundary mass) / pi^2.  The quadratic
/// reference |z|^2 / 2 has ball mass pi^2 R^4, and log|z| has mass pi^2 at
/// every radius (a pure point mass).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/field.hpp"
#include "pshlab/hessian.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/jet.hpp"
#include "pshlab/lelong.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

namespace detail {

inline void check_mass_radius(const ScalarField& field, double R,
                              const char* what) {
  if (!(R > 0.0) || !(R < field.info().domain_radius)) {
    throw BadParams(std::string(what) +
                    ": radius must lie inside the field's domain ball");
  }
}

}  // namespace detail

/// Volume route: integral of the pointwise Monge-Ampere density
/// 8 det(u_{j kbar}) over the shell r_min < |z| < R.  Misses any mass
/// carried by the origin itself (pure point masses integrate to zero).
/// r_min < 0 selects the default cutoff spec.r_min_factor * R.
inline double ma_volume(const ScalarField& field, double R, double r_min = -1.0,
                        const QuadratureSpec& spec = {},
                        const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "ma_volume");
  if (r_min < 0.0) r_min = spec.r_min_factor * R;
  return integrate_ball(
      [&field, &engine](const CxPoint& z) {
        return 8.0 * jet_of(field, z, engine).hessH.det();
      },
      R, r_min, spec);
}

/// Boundary route: integral of the 3-form d^c u wedge dd^c u over S_R,
/// pulled back through the principal chart (theta, eta, phi).  By Stokes
/// this equals the full ball mass including the point mass at the origin.
inline double ma_boundary(const ScalarField& field, double R,
                          const QuadratureSpec& spec = {},
                          const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "ma_boundary");
  validate(spec);
  const Rule1D th = theta_rule(spec);
  const Rule1D et = eta_rule(spec);
  const Rule1D ph = phi_rule(spec);
  const std::size_t n_t = th.nodes.size();
  const std::size_t n_e = et.nodes.size();
  const std::size_t n_p = ph.nodes.size();

  return detail::weighted_sum(
      n_t * n_e * n_p,
      [&](std::size_t idx) {
        const std::size_t it = idx / (n_e * n_p);
        const std::size_t ie = (idx / n_p) % n_e;
        const std::size_t ip = idx % n_p;
        const double theta = th.nodes[it];
        const double eta = et.nodes[ie];
        const double phi = ph.nodes[ip];
        const cx eiphi = std::polar(1.0, phi);
        const cx zeta = std::tan(0.5 * eta) * eiphi;

        const HopfPoint p{R, theta, zeta, Chart::Principal};
        const ChartJet cj = chart_jet(p);
        const Jet2 jet = jet_of(field, CxPoint{cj.z[0], cj.z[1]}, engine);

        // Coordinate tangents of the chart: the fiber direction moves z^j
        // at rate c z^j, the base directions move zeta by dzeta/deta =
        // sec^2(eta/2) e^{i phi} / 2 and dzeta/dphi = i zeta.
        const cx zeta_eta =
            0.5 * eiphi / (std::cos(0.5 * eta) * std::cos(0.5 * eta));
        const cx zeta_phi = cx(0.0, 1.0) * zeta;
        std::array<std::array<cx, 2>, 3> a;  // holomorphic components
        for (std::size_t j = 0; j < 2; ++j) {
          a[0][j] = cj.c * cj.z[j];
          a[1][j] = cj.dz[j] * zeta_eta + cj.dzb[j] * std::conj(zeta_eta);
          a[2][j] = cj.dz[j] * zeta_phi + cj.dzb[j] * std::conj(zeta_phi);
        }

        // d^c u (V) = Im(sum_j u_j a^j) for a real tangent vector with
        // holomorphic components a^j; dd^c u (V, W) = -2 Im(sum_{jk}
        // u_{j kbar} a_V^j conj(a_W^k)).
        const auto dc = [&jet](const std::array<cx, 2>& v) {
          return std::imag(jet.du[0] * v[0] + jet.du[1] * v[1]);
        };
        const auto ddc = [&jet](const std::array<cx, 2>& v,
                                const std::array<cx, 2>& w) {
          cx s = 0.0;
          for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
              s += jet.hessH.at(j, k) * v[j] * std::conj(w[k]);
            }
          }
          return -2.0 * std::imag(s);
        };

        const double form = dc(a[0]) * ddc(a[1], a[2]) -
                            dc(a[1]) * ddc(a[0], a[2]) +
                            dc(a[2]) * ddc(a[0], a[1]);
        return form * th.weights[it] * et.weights[ie] * ph.weights[ip];
      },
      "ma_boundary");
}

/// Decomposition route: the boundary mass rearranged by fiber integration
/// by parts into transverse and fiber contributions,
///   [ 2 int u_t s11 dtheta wedge (i dzeta wedge dzetabar)
///     - int (u_t^2 - 4 u_theta^2) dtheta wedge omega_FS ] / 4,
/// using i dzeta wedge dzetabar = 2 (1+|zeta|^2)^2 omega_FS.
inline double ma_decomposition(const ScalarField& field, double R,
                               const QuadratureSpec& spec = {},
                               const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "ma_decomposition");
  validate(spec);
  const Rule1D th = theta_rule(spec);
  const std::vector<Cp1Node> zg = cp1_nodes(spec);
  const std::size_t n_t = th.nodes.size();
  const std::size_t n_z = zg.size();

  return detail::weighted_sum(
      n_t * n_z,
      [&](std::size_t idx) {
        const std::size_t it = idx / n_z;
        const std::size_t iz = idx % n_z;
        const HopfPoint p{R, th.nodes[it], zg[iz].zeta, Chart::Principal};
        const FrameJet fj = frame_apply(field, p, engine);
        const SasakiHessian sh = sasaki_hessian_hopf(fj);
        const double w2 = 1.0 + std::norm(zg[iz].zeta);
        const double w4 = w2 * w2;
        const double weight = th.weights[it] * zg[iz].w_fs;
        const double transverse = 2.0 * fj.u_t * sh.s11 * (2.0 * w4) * weight;
        const double fiber =
            (fj.u_t * fj.u_t - 4.0 * fj.u_theta * fj.u_theta) * weight;
        return (transverse - fiber) / 4.0;
      },
      "ma_decomposition");
}

/// One term of the general fiber-decomposition coefficient table: the
/// power k of the fiber derivative, the binomial magnitude, and the
/// alternating sign.
struct DecompTerm {
  int k = 0;
  double coefficient = 0.0;
  int sign = +1;
};

/// Coefficients binom(n+1, k+1) (-1)^k, k = 0..n, of the order-n fiber
/// decomposition; n = 1 reproduces the (2, -1) pair used above.
inline std::vector<DecompTerm> decomp_coefficients(int n) {
  if (n < 1) throw BadParams("decomp_coefficients: n must be at least 1");
  std::vector<DecompTerm> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double binom = 1.0;  // binom(n+1, k+1)
    for (int i = 0; i < k + 1; ++i) {
      binom *= static_cast<double>(n + 1 - i) / static_cast<double>(i + 1);
    }
    DecompTerm t;
    t.k = k;
    t.coefficient = binom;
    t.sign = (k % 2 == 0) ? +1 : -1;
    terms.push_back(t);
  }
  return terms;
}

/// Pohozaev identity on the complex line through the origin with direction
/// (1, zeta)/w: for a C^2 restriction v,
///   2 int_{D_R} (rho v_rho) (Laplacian v) dA = int (v_t^2 - v_theta^2) dtheta
/// at rho = R.  The left side is shell-truncated at rho = r_min; a point
/// mass at the origin shows up as a residual 2 pi nu^2.
struct PohozaevReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

inline PohozaevReport pohozaev_residual(const ScalarField& field, cx zeta,
                                        double R,
                                        const QuadratureSpec& spec = {},
                                        const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "pohozaev_residual");
  validate(spec);
  const double w = std::sqrt(1.0 + std::norm(zeta));
  const cx d0 = 1.0 / w;
  const cx d1 = zeta / w;

  struct LineJet {
    double u_t;      // rho v_rho
    double u_theta;  // angular derivative
    double lap;      // Laplacian of the restriction
  };
  const auto line_jet = [&](cx lambda) {
    const CxPoint z{lambda * d0, lambda * d1};
    const Jet2 jet = jet_of(field, z, engine);
    const cx v_l = d0 * jet.du[0] + d1 * jet.du[1];
    cx v_llb = 0.0;
    const std::array<cx, 2> d{d0, d1};
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        v_llb += jet.hessH.at(j, k) * d[j] * std::conj(d[k]);
      }
    }
    LineJet lj;
    lj.u_t = 2.0 * std::real(lambda * v_l);
    lj.u_theta = -2.0 * std::imag(lambda * v_l);
    lj.lap = 4.0 * std::real(v_llb);
    if (!std::isfinite(lj.u_t) || !std::isfinite(lj.u_theta) ||
        !std::isfinite(lj.lap)) {
      throw RestrictionSingular(
          "pohozaev_residual: the restriction to the line is singular "
          "inside the disk away from the origin");
    }
    return lj;
  };

  const double r_min = spec.r_min_factor * R;
  const Rule1D rad = radial_rule(spec, r_min, R);
  const Rule1D ang = trapezoid_periodic(spec.n_theta, 2.0 * kPi);

  double lhs = 0.0;
  for (std::size_t ir = 0; ir < rad.nodes.size(); ++ir) {
    const double rho = rad.nodes[ir];
    for (std::size_t ia = 0; ia < ang.nodes.size(); ++ia) {
      const LineJet lj = line_jet(std::polar(rho, ang.nodes[ia]));
      lhs += 2.0 * lj.u_t * lj.lap * rho * rad.weights[ir] * ang.weights[ia];
    }
  }
  double rhs = 0.0;
  for (std::size_t ia = 0; ia < ang.nodes.size(); ++ia) {
    const LineJet lj = line_jet(std::polar(R, ang.nodes[ia]));
    rhs += (lj.u_t * lj.u_t - lj.u_theta * lj.u_theta) * ang.weights[ia];
  }

  PohozaevReport report;
  report.lhs = lhs;
  report.rhs = rhs;
  report.residual = lhs - rhs;
  return report;
}

namespace detail {

/// Sampled max of |r u_r| over the ball of radius e^{-A}; fields whose
/// radial slope is unbounded near the origin get the steep probe family
/// merged into the sample so the reported lower bound reflects the blowup.
inline double lipschitz_for_bound(const ScalarField& field, double A,
                                  const QuadratureSpec& spec) {
  std::vector<CxPoint> extra;
  if (field.info().lipschitz_fails) {
    for (const SteepProbe& probe :
         steep_radial_probes({4, 6, 10, 16, 25, 40, 64})) {
      extra.push_back(probe.z);
    }
  }
  return lipschitz_ladder(field, A, spec, extra);
}

/// Mean of u_t = r u_r over S_R against the uniform probability measure.
inline double mean_radial_slope(const ScalarField& field, double R,
                                const QuadratureSpec& spec,
                                const FdSpec& engine) {
  return integrate_sphere(
             [&](const HopfPoint& p) {
               const CxPoint z = embed(p);
               return radial_log_derivative(jet_of(field, z, engine), z);
             },
             R, spec) /
         (4.0 * kPi * kPi);
}

}  // namespace detail

/// The mass/derivative bound at depth A = -log R:
///   (boundary mass)/pi^2  <=  4 L_A (mean of u_t over S_R).
struct BoundReport {
  double lhs = 0.0;      ///< boundary mass / pi^2
  double rhs = 0.0;      ///< 4 L_A mean(u_t)
  double slack = 0.0;    ///< rhs - lhs, nonnegative for psh fields
  double L_A = 0.0;
  double mean_ut = 0.0;
};

inline BoundReport theorem_bound(const ScalarField& field, double R,
                                 const QuadratureSpec& spec = {},
                                 const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "theorem_bound");
  if (!(R < 1.0)) {
    throw BadParams("theorem_bound: radius must be below 1 so the depth "
                    "A = -log R is positive");
  }
  const double A = -std::log(R);
  BoundReport report;
  report.lhs = ma_boundary(field, R, spec, engine) / (kPi * kPi);
  report.L_A = detail::lipschitz_for_bound(field, A, spec);
  report.mean_ut = detail::mean_radial_slope(field, R, spec, engine);
  report.rhs = 4.0 * report.L_A * report.mean_ut;
  report.slack = report.rhs - report.lhs;
  return report;
}

/// Volume-normalized comparison at radius R: the ratio of the boundary
/// mass to the reference ball mass pi^2 R^4 against the derivative bound
/// 8 R^{-3} L_A mean(u_r).
struct VolumeComparison {
  double ratio = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< bound - ratio
};

inline VolumeComparison volume_comparison(const ScalarField& field, double R,
                                          const QuadratureSpec& spec = {},
                                          const FdSpec& engine = {}) {
  detail::check_mass_radius(field, R, "volume_comparison");
  if (!(R < 1.0)) {
    throw BadParams("volume_comparison: radius must be below 1 so the depth "
                    "A = -log R is positive");
  }
  const double A = -std::log(R);
  VolumeComparison out;
  out.ratio = ma_boundary(field, R, spec, engine) / (kPi * kPi * R * R * R * R);
  const double L_A = detail::lipschitz_for_bound(field, A, spec);
  const double mean_ur = detail::mean_radial_slope(field, R, spec, engine) / R;
  out.bound = 8.0 * L_A * mean_ur / (R * R * R);
  out.slack = out.bound - out.ratio;
  return out;
}

/// One-stop mass report at radius R: the three routes, the normalized
/// point-mass estimate tau = boundary/pi^2, and both comparison bounds.
struct MassReport {
  std::string fn;
  double R = 0.0;
  double ma_volume = 0.0;
  double ma_boundary = 0.0;
  double ma_decomp = 0.0;
  double tau_estimate = 0.0;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  double slack = 0.0;
  double vol_ratio = 0.0;
};

inline MassReport mass_report(const ScalarField& field, double R,
                              const QuadratureSpec& spec = {},
                              const FdSpec& engine = {}) {
  MassReport report;
  report.fn = field.info().name;
  report.R = R;
  report.ma_volume = ma_volume(field, R, -1.0, spec, engine);
  report.ma_boundary = ma_boundary(field, R, spec, engine);
  report.ma_decomp = ma_decomposition(field, R, spec, engine);
  report.tau_estimate = report.ma_boundary / (kPi * kPi);
  // The bound pieces reuse the boundary integral above instead of going
  // through theorem_bound / volume_comparison, which would recompute it.
  const double A = -std::log(R);
  const double L_A = detail::lipschitz_for_bound(field, A, spec);
  const double mean_ut = detail::mean_radial_slope(field, R, spec, engine);
  report.bound_lhs = report.tau_estimate;
  report.bound_rhs = 4.0 * L_A * mean_ut;
  report.slack = report.bound_rhs - report.bound_lhs;
  report.vol_ratio = report.ma_boundary / (kPi * kPi * R * R * R * R);
  return report;
}

}  // namespace pshlab
