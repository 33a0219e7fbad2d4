#pragma once

/// \file quadrature.hpp
/// \brief Deterministic product quadrature on CP^1, round spheres, and balls
/// in C^2, built from Gauss-Legendre and periodic-trapezoid 1-D rules.
///
/// Measure conventions (all angles in the principal chart):
///
///  * CP^1 is parametrized by zeta = tan(eta/2) e^{i phi}, eta in (0, pi),
///    phi in [0, 2 pi).  The Fubini-Study form omega_FS =
///    (i/2) dzeta wedge dzetabar / (1+|zeta|^2)^2 pulls back to
///    (1/4) sin(eta) deta dphi, total mass pi.
///
///  * The sphere S_R uses the product measure dtheta wedge omega_FS with
///    theta in [0, 4 pi); its total mass is 4 pi^2.  The Euclidean area
///    element of S_R in C^2 is (R^3/2) dtheta wedge omega_FS, total
///    2 pi^2 R^3.
///
///  * The Euclidean volume element is dV = (r^3/2) dr dtheta wedge
///    omega_FS, so Vol(B_R) = pi^2 R^4 / 2.
///
/// Gauss-Legendre nodes are interior, so eta never touches the poles and r
/// never touches 0.  Periodic trapezoid nodes are offset by half a step;
/// with an even phi count the node set never meets phi = pi, keeping all
/// nodes off the principal-chart cut.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/parallel.hpp"

namespace pshlab {

/// Nodes and weights of a one-dimensional rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on the
/// Legendre polynomial; exact for polynomials of degree <= 2n-1.
inline Rule1D gauss_legendre(int n) {
  if (n < 1) throw BadParams("gauss_legendre: need at least one node");
  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x).
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n and P_n' by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline Rule1D gauss_legendre_on(int n, double a, double b) {
  if (!(b > a)) throw BadParams("gauss_legendre_on: need b > a");
  Rule1D rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Periodic trapezoid rule on [0, period) with half-step node offset;
/// spectrally accurate for smooth periodic integrands and exact for low
/// trigonometric polynomials.
inline Rule1D trapezoid_periodic(int n, double period) {
  if (n < 1) throw BadParams("trapezoid_periodic: need at least one node");
  if (!(period > 0.0)) throw BadParams("trapezoid_periodic: period must be positive");
  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double step = period / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] =
        step * (static_cast<double>(i) + 0.5);
    rule.weights[static_cast<std::size_t>(i)] = step;
  }
  return rule;
}

/// Node counts for the product rules.  theta is the fiber angle (period
/// 4 pi), (eta, phi) parametrize CP^1, and radial counts the Gauss nodes
/// of ball integrals.  r_min_factor sets the default inner cutoff of ball
/// integrals relative to the outer radius.
struct QuadratureSpec {
  int n_theta = 32;
  int n_eta = 24;
  int n_phi = 32;
  int n_radial = 24;
  double r_min_factor = 1e-3;
};

/// Validates a spec: all counts at least 4, and an even phi count so the
/// node set stays off the principal-chart cut at phi = pi.
inline void validate(const QuadratureSpec& spec) {
  if (spec.n_theta < 4 || spec.n_eta < 4 || spec.n_phi < 4 ||
      spec.n_radial < 4) {
    throw BadParams("QuadratureSpec: all node counts must be at least 4");
  }
  if (spec.n_phi % 2 != 0) {
    throw BadParams("QuadratureSpec: n_phi must be even (phi = pi hits the chart cut)");
  }
  if (!(spec.r_min_factor > 0.0) || !(spec.r_min_factor < 1.0)) {
    throw BadParams("QuadratureSpec: r_min_factor must lie in (0, 1)");
  }
}

/// 1-D factors of the product rules.
inline Rule1D theta_rule(const QuadratureSpec& spec) {
  return trapezoid_periodic(spec.n_theta, 4.0 * kPi);
}
inline Rule1D eta_rule(const QuadratureSpec& spec) {
  return gauss_legendre_on(spec.n_eta, 0.0, kPi);
}
inline Rule1D phi_rule(const QuadratureSpec& spec) {
  return trapezoid_periodic(spec.n_phi, 2.0 * kPi);
}
inline Rule1D radial_rule(const QuadratureSpec& spec, double a, double b) {
  return gauss_legendre_on(spec.n_radial, a, b);
}

/// A CP^1 quadrature node: fiber coordinate and Fubini-Study weight.
struct Cp1Node {
  cx zeta;
  double w_fs;  ///< weight against omega_FS; weights sum to pi
};

/// Product nodes for integrals against omega_FS on CP^1.
inline std::vector<Cp1Node> cp1_nodes(const QuadratureSpec& spec) {
  validate(spec);
  const Rule1D eta = eta_rule(spec);
  const Rule1D phi = phi_rule(spec);
  std::vector<Cp1Node> nodes;
  nodes.reserve(eta.nodes.size() * phi.nodes.size());
  for (std::size_t j = 0; j < eta.nodes.size(); ++j) {
    const double e = eta.nodes[j];
    const double mag = std::tan(0.5 * e);
    const double w_eta = 0.25 * std::sin(e) * eta.weights[j];
    for (std::size_t k = 0; k < phi.nodes.size(); ++k) {
      Cp1Node node;
      node.zeta = std::polar(mag, phi.nodes[k]);
      node.w_fs = w_eta * phi.weights[k];
      nodes.push_back(node);
    }
  }
  return nodes;
}

/// A sphere quadrature node: principal-chart point (r set to the sphere
/// radius) and weight against dtheta wedge omega_FS.
struct SphereNode {
  HopfPoint p;
  double w;  ///< weight against dtheta wedge omega_FS; weights sum to 4 pi^2
};

/// Product nodes for integrals over S_R against dtheta wedge omega_FS.
inline std::vector<SphereNode> sphere_nodes(double R,
                                            const QuadratureSpec& spec) {
  validate(spec);
  if (!(R > 0.0)) throw BadParams("sphere_nodes: R must be positive");
  const Rule1D theta = theta_rule(spec);
  const std::vector<Cp1Node> base = cp1_nodes(spec);
  std::vector<SphereNode> nodes;
  nodes.reserve(theta.nodes.size() * base.size());
  for (std::size_t i = 0; i < theta.nodes.size(); ++i) {
    for (const Cp1Node& b : base) {
      SphereNode node;
      node.p.r = R;
      node.p.theta = theta.nodes[i];
      node.p.zeta = b.zeta;
      node.p.chart = Chart::Principal;
      node.w = theta.weights[i] * b.w_fs;
      nodes.push_back(node);
    }
  }
  return nodes;
}

namespace detail {

/// Weighted sum of f over an index range with the non-finite check, filled
/// deterministically and reduced pairwise.
template <typename NodeEval>
double weighted_sum(std::size_t n, const NodeEval& eval, const char* what) {
  std::vector<double> terms = parallel_fill(n, eval);
  for (double t : terms) {
    if (!std::isfinite(t)) {
      throw NodeSingular(std::string(what) + ": integrand is not finite at a node");
    }
  }
  return pairwise_sum(std::move(terms));
}

}  // namespace detail

/// Integral of g(zeta) over CP^1 against omega_FS.
inline double integrate_cp1(const std::function<double(cx)>& g,
                            const QuadratureSpec& spec = {}) {
  const std::vector<Cp1Node> nodes = cp1_nodes(spec);
  return detail::weighted_sum(
      nodes.size(),
      [&](std::size_t i) { return g(nodes[i].zeta) * nodes[i].w_fs; },
      "integrate_cp1");
}

/// Integral of F over S_R against dtheta wedge omega_FS (total mass
/// 4 pi^2); F receives the principal-chart node point.
inline double integrate_sphere(const std::function<double(const HopfPoint&)>& F,
                               double R, const QuadratureSpec& spec = {}) {
  const std::vector<SphereNode> nodes = sphere_nodes(R, spec);
  return detail::weighted_sum(
      nodes.size(),
      [&](std::size_t i) { return F(nodes[i].p) * nodes[i].w; },
      "integrate_sphere");
}

/// Integral of F over S_R against the Euclidean area element
/// (R^3/2) dtheta wedge omega_FS (total 2 pi^2 R^3).
inline double integrate_sphere_euclidean(
    const std::function<double(const HopfPoint&)>& F, double R,
    const QuadratureSpec& spec = {}) {
  return 0.5 * R * R * R * integrate_sphere(F, R, spec);
}

/// Integral of a pointwise density over the shell r_min < |z| < R against
/// Euclidean volume, dV = (r^3/2) dr dtheta wedge omega_FS.  Nodes are
/// reached through the principal-chart embedding; Gauss nodes keep r
/// interior.  r_min = 0 integrates over the (punctured) ball.
inline double integrate_ball(const std::function<double(const CxPoint&)>& density,
                             double R, double r_min,
                             const QuadratureSpec& spec = {}) {
  validate(spec);
  if (!(R > 0.0)) throw BadParams("integrate_ball: R must be positive");
  if (r_min < 0.0 || r_min >= R) {
    throw BadParams("integrate_ball: need 0 <= r_min < R");
  }
  const Rule1D radial = radial_rule(spec, r_min, R);
  const std::vector<SphereNode> shell = sphere_nodes(1.0, spec);
  const std::size_t n_r = radial.nodes.size();
  const std::size_t n_s = shell.size();
  return detail::weighted_sum(
      n_r * n_s,
      [&](std::size_t idx) {
        const std::size_t ir = idx / n_s;
        const std::size_t is = idx % n_s;
        const double r = radial.nodes[ir];
        HopfPoint p = shell[is].p;
        p.r = r;
        const double w =
            0.5 * r * r * r * radial.weights[ir] * shell[is].w;
        return density(embed(p)) * w;
      },
      "integrate_ball");
}

}  // namespace pshlab
