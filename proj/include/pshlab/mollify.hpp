#pragma once

/// \file mollify.hpp
/// \brief Smoothing by the compactly supported polynomial bump
///        rho(y) = c (1 - |y|^2)^m on the unit ball of C^2 = R^4, with
///        one-pass kernel-derivative jets of the smoothed field, the
///        Friedrichs commutation check for the radial derivative, and the
///        stability of the Lipschitz ladder under smoothing.
///
/// The kernel rule is a radial Gauss rule on [0, 1] paired with the
/// sphere product rule on S^3.  Every factor of the bump and of its
/// derivative tables is a polynomial in the radius times a trigonometric
/// harmonic of degree at most four, so the discrete table annihilates
/// constants and reproduces linear and quadratic moments to rounding;
/// without this the 1/eps^2 scaling of the second-derivative weights
/// would amplify any quadrature defect of the truncated bump.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/field.hpp"
#include "pshlab/jet.hpp"
#include "pshlab/lelong.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

/// Smoothing parameters: radius epsilon, the power of the bump, and the
/// radial Gauss node count of the kernel rule.
struct MollifierSpec {
  double epsilon = 0.02;
  int kernel_order = 3;
  int n_kernel_nodes = 5;
};

inline void validate(const MollifierSpec& spec) {
  if (!(spec.epsilon > 0.0)) {
    throw BadParams("MollifierSpec: epsilon must be positive");
  }
  if (spec.kernel_order < 2 || spec.kernel_order > 5) {
    throw BadParams("MollifierSpec: kernel_order must lie in [2, 5] (second "
                    "derivatives of the bump need order at least 2)");
  }
  if (spec.n_kernel_nodes < 3 || spec.n_kernel_nodes > 7) {
    throw BadParams("MollifierSpec: n_kernel_nodes must lie in [3, 7]");
  }
  if (2 * spec.n_kernel_nodes - 1 < 2 * spec.kernel_order + 3) {
    throw BadParams("MollifierSpec: the radial rule must integrate the bump's "
                    "second moments exactly (need 2n-1 >= 2m+3)");
  }
}

/// Precomputed kernel table.  Each node carries the bump value and all
/// its first and second Wirtinger derivatives, pre-multiplied by the
/// 4-D product weight, so one sweep of field evaluations yields the
/// full jet of the smoothed field:
///   d_j rho        = -m c ybar^j (1-|y|^2)^{m-1}
///   d_{j kbar} rho = -m c (1-|y|^2)^{m-2} [delta_{jk} (1-|y|^2)
///                                          - (m-1) ybar^j y^k]
///   d_{j k}  rho   = m (m-1) c ybar^j ybar^k (1-|y|^2)^{m-2}.
class Mollifier {
 public:
  explicit Mollifier(MollifierSpec spec = {}) : spec_(spec) {
    validate(spec_);
    const double md = static_cast<double>(spec_.kernel_order);

    // Radius times direction: Gauss on [0, 1] (exact through degree
    // 2m+3, which covers every radial moment the derivative tables
    // need) against the S^3 product rule.  The angular counts are fixed:
    // the identities involve harmonics of theta/2, phi of degree at most
    // four, which the two trapezoid factors integrate exactly, and
    // analytic integrands in eta, which eight Gauss nodes reduce to
    // rounding.  The even theta count keeps the node set antipodally
    // symmetric, so odd moments vanish exactly.
    const Rule1D radial = gauss_legendre_on(spec_.n_kernel_nodes, 0.0, 1.0);
    const QuadratureSpec angular{6, 8, 6, 4, 1e-3};
    const std::vector<SphereNode> shell = sphere_nodes(1.0, angular);

    // Normalization of c (1 - |y|^2)^m over the unit ball of R^4.
    const double c = (md + 1.0) * (md + 2.0) / (kPi * kPi);
    second_moment_ = 0.0;
    nodes_.reserve(radial.nodes.size() * shell.size());
    for (std::size_t ir = 0; ir < radial.nodes.size(); ++ir) {
      const double s = radial.nodes[ir];
      // d^4 y = s^3 ds (1/2) dtheta wedge omega_FS on |y| = s.
      const double w_vol = radial.weights[ir] * s * s * s * 0.5;
      for (const SphereNode& sn : shell) {
        const CxPoint omega = embed(sn.p);
        Node node;
        node.x = CxPoint{s * omega.z0, s * omega.z1};
        node.w = w_vol * sn.w;
        node.base = 1.0 - s * s;
        const double bm = std::pow(node.base, md);
        const double bm1 = std::pow(node.base, md - 1.0);
        const double bm2 = std::pow(node.base, md - 2.0);
        const std::array<cx, 2> xb{std::conj(node.x.z0), std::conj(node.x.z1)};
        const std::array<cx, 2> x{node.x.z0, node.x.z1};
        node.w_rho = node.w * c * bm;
        for (std::size_t j = 0; j < 2; ++j) {
          node.w_drho[j] = node.w * c * (-md) * xb[j] * bm1;
        }
        node.w_mix00 = node.w * c * (-md) * bm2 *
                       (node.base - (md - 1.0) * std::norm(x[0]));
        node.w_mix11 = node.w * c * (-md) * bm2 *
                       (node.base - (md - 1.0) * std::norm(x[1]));
        node.w_mix01 = node.w * c * md * (md - 1.0) * bm2 * xb[0] * x[1];
        node.w_hol00 = node.w * c * md * (md - 1.0) * bm2 * xb[0] * xb[0];
        node.w_hol01 = node.w * c * md * (md - 1.0) * bm2 * xb[0] * xb[1];
        node.w_hol11 = node.w * c * md * (md - 1.0) * bm2 * xb[1] * xb[1];
        second_moment_ += node.w_rho * (s * s);
        nodes_.push_back(node);
      }
    }
  }

  const MollifierSpec& spec() const { return spec_; }
  double epsilon() const { return spec_.epsilon; }

  /// Discrete mass of the kernel (1 by construction, up to rounding).
  double mass() const {
    double s = 0.0;
    for (const Node& node : nodes_) s += node.w_rho;
    return s;
  }

  /// Discrete second moment int |y|^2 rho; the order-3 bump has 1/3.
  double second_moment() const { return second_moment_; }

  /// Value of the smoothed field u * rho_epsilon at p.
  double eval(const ScalarField& field, const CxPoint& p) const {
    check_inside(field, p);
    double acc = 0.0;
    for (const Node& node : nodes_) {
      acc += field.eval(shift(p, node)) * node.w_rho;
    }
    return acc;
  }

  /// Full jet of the smoothed field at p from one sweep of evaluations,
  /// by moving all derivatives onto the kernel.
  Jet2 jet(const ScalarField& field, const CxPoint& p) const {
    check_inside(field, p);
    const double inv_e = 1.0 / spec_.epsilon;
    const double inv_e2 = inv_e * inv_e;
    Jet2 out;
    for (const Node& node : nodes_) {
      const double u = field.eval(shift(p, node));
      out.u += u * node.w_rho;
      out.du[0] += u * node.w_drho[0] * inv_e;
      out.du[1] += u * node.w_drho[1] * inv_e;
      out.hessH.a00 += u * node.w_mix00 * inv_e2;
      out.hessH.a11 += u * node.w_mix11 * inv_e2;
      out.hessH.a01 += u * node.w_mix01 * inv_e2;
      out.hessHol.a00 += u * node.w_hol00 * inv_e2;
      out.hessHol.a01 += u * node.w_hol01 * inv_e2;
      out.hessHol.a11 += u * node.w_hol11 * inv_e2;
    }
    return out;
  }

 private:
  struct Node {
    CxPoint x;  // offset in the unit ball; the field is read at p - eps x
    double w = 0.0;
    double base = 0.0;
    double w_rho = 0.0;
    std::array<cx, 2> w_drho{};
    double w_mix00 = 0.0, w_mix11 = 0.0;
    cx w_mix01{0.0, 0.0};
    cx w_hol00{0.0, 0.0}, w_hol01{0.0, 0.0}, w_hol11{0.0, 0.0};
  };

  CxPoint shift(const CxPoint& p, const Node& node) const {
    return CxPoint{p.z0 - spec_.epsilon * node.x.z0,
                   p.z1 - spec_.epsilon * node.x.z1};
  }

  void check_inside(const ScalarField& field, const CxPoint& p) const {
    if (p.abs() + spec_.epsilon >= field.info().domain_radius) {
      throw OutsideDomain("Mollifier: the smoothing ball around the point "
                          "leaves the field's domain");
    }
  }

  MollifierSpec spec_;
  std::vector<Node> nodes_;
  double second_moment_ = 0.0;
};

/// Convenience one-off value of the smoothed field.
inline double mollified_eval(const ScalarField& field, const CxPoint& p,
                             const MollifierSpec& spec = {}) {
  return Mollifier(spec).eval(field, p);
}

/// Convenience one-off jet of the smoothed field.
inline Jet2 mollified_jet(const ScalarField& field, const CxPoint& p,
                          const MollifierSpec& spec = {}) {
  return Mollifier(spec).jet(field, p);
}

/// The smoothed field as a field: closed-form jets come from the kernel
/// table, the domain shrinks by epsilon, and smoothness is restored.
inline FieldPtr mollified_field(FieldPtr base, const MollifierSpec& spec = {}) {
  if (!base) throw BadParams("mollified_field: null field");
  auto mol = std::make_shared<Mollifier>(spec);
  FieldInfo info = base->info();
  info.name += "_eps";
  info.smooth_off_origin = true;
  info.domain_radius = std::max(0.0, info.domain_radius - spec.epsilon);
  if (!(info.domain_radius > 0.0)) {
    throw BadParams("mollified_field: epsilon swallows the whole domain");
  }
  return std::make_shared<LambdaField>(
      info,
      [base, mol](const CxPoint& p) { return mol->eval(*base, p); },
      [base, mol](const CxPoint& p) -> std::optional<Jet2> {
        return mol->jet(*base, p);
      });
}

namespace detail {

/// Radial derivative u_r at q, preferring closed-form jets and falling
/// back to a central log-radial difference of the evaluation.
inline double radial_derivative(const ScalarField& field, const CxPoint& q,
                                double fd_h = 1e-5) {
  const double r = q.abs();
  if (const auto jet = field.closed_form_jet(q)) {
    return radial_log_derivative(*jet, q) / r;
  }
  const double up = field.eval(CxPoint{q.z0 * std::exp(fd_h), q.z1 * std::exp(fd_h)});
  const double dn =
      field.eval(CxPoint{q.z0 * std::exp(-fd_h), q.z1 * std::exp(-fd_h)});
  return (up - dn) / (2.0 * fd_h * r);
}

}  // namespace detail

/// Friedrichs commutation check at p: the defect between the radial
/// derivative of the smoothed field and the smoothed radial derivative,
///   | r d_r (u * rho_eps) - r ((d_r u) * rho_eps) |,
/// against the bound 2 eps ||grad u||_{L^1(B_{1-delta})} (the gradient
/// integral uses a sampled quadrature, so the comparison carries the
/// stated additive tolerance in tests).
struct FriedrichsReport {
  double defect = 0.0;
  double bound = 0.0;
  double outer = 0.0;  ///< r d_r (u * rho_eps)
  double inner = 0.0;  ///< r ((d_r u) * rho_eps)
};

inline FriedrichsReport friedrichs_check(const ScalarField& field,
                                         const CxPoint& p,
                                         const MollifierSpec& spec = {},
                                         double delta = 0.1,
                                         const QuadratureSpec& grad_spec = {16, 12, 16, 12, 1e-3},
                                         const FdSpec& engine = {}) {
  if (!(delta > 0.0) || !(spec.epsilon < delta)) {
    throw BadParams("friedrichs_check: need 0 < epsilon < delta");
  }
  const double domain = field.info().domain_radius;
  if (!(p.abs() <= domain - 2.0 * delta)) {
    throw BadParams("friedrichs_check: the point must sit at distance at "
                    "least 2 delta from the domain boundary");
  }
  const Mollifier mol(spec);

  const double h = 1e-4;
  const double up = mol.eval(field, CxPoint{p.z0 * std::exp(h), p.z1 * std::exp(h)});
  const double dn =
      mol.eval(field, CxPoint{p.z0 * std::exp(-h), p.z1 * std::exp(-h)});

  FriedrichsReport report;
  report.outer = (up - dn) / (2.0 * h);

  // Smooth the radial derivative itself with the same kernel.
  double inner = 0.0;
  {
    const auto wrapped = [&field](const CxPoint& q) {
      return detail::radial_derivative(field, q);
    };
    FieldInfo info = field.info();
    info.name += "_dr";
    const LambdaField dr_field(info, wrapped);
    inner = p.abs() * mol.eval(dr_field, p);
  }
  report.inner = inner;
  report.defect = std::abs(report.outer - report.inner);

  const double grad_l1 = integrate_ball(
      [&field, &engine](const CxPoint& z) {
        return gradient_norm(jet_of(field, z, engine));
      },
      domain - delta, grad_spec.r_min_factor * (domain - delta), grad_spec);
  report.bound = 2.0 * spec.epsilon * grad_l1;
  return report;
}

/// Stability of the Lipschitz ladder under smoothing: L_A of the smoothed
/// field along an epsilon ladder against L_A of the field itself, with a
/// least-squares-through-origin rate for the positive part of the excess.
struct StabilityRow {
  double epsilon = 0.0;
  double L_eps = 0.0;
  double excess = 0.0;  ///< L_eps - L_base
};

struct StabilityTable {
  double A = 0.0;
  double L_base = 0.0;
  double C_fit = 0.0;  ///< fitted linear rate of the positive excess
  std::vector<StabilityRow> rows;
  bool within_envelope = false;
};

inline StabilityTable lipschitz_stability_check(
    FieldPtr field, double A, const std::vector<double>& eps_ladder,
    const MollifierSpec& base_spec = {},
    const QuadratureSpec& sample_spec = {8, 6, 8, 6, 1e-2}) {
  if (!field) throw BadParams("lipschitz_stability_check: null field");
  if (eps_ladder.empty()) {
    throw BadParams("lipschitz_stability_check: empty epsilon ladder");
  }
  if (!(A > 0.0)) {
    throw BadParams("lipschitz_stability_check: A must be positive");
  }
  const double eps_max = 0.5 * (field->info().domain_radius - std::exp(-A));
  StabilityTable table;
  table.A = A;
  table.L_base = lipschitz_ladder(*field, A, sample_spec);

  double sxy = 0.0, sxx = 0.0;
  for (double eps : eps_ladder) {
    if (!(eps > 0.0) || !(eps < eps_max)) {
      throw BadParams("lipschitz_stability_check: epsilon must stay below "
                      "half the gap between the sample ball and the domain");
    }
    MollifierSpec spec = base_spec;
    spec.epsilon = eps;
    const FieldPtr smoothed = mollified_field(field, spec);
    StabilityRow row;
    row.epsilon = eps;
    row.L_eps = lipschitz_ladder(*smoothed, A, sample_spec);
    row.excess = row.L_eps - table.L_base;
    sxy += std::max(row.excess, 0.0) * eps;
    sxx += eps * eps;
    table.rows.push_back(row);
  }
  table.C_fit = sxy / sxx;
  table.within_envelope = true;
  for (const StabilityRow& row : table.rows) {
    const double allowance =
        1.5 * table.C_fit * row.epsilon + 1e-6;  // 50% envelope slack
    if (row.excess > allowance) table.within_envelope = false;
  }
  return table;
}

}  // namespace pshlab
