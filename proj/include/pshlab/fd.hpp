#pragma once

/// \file fd.hpp
/// \brief Derivative engines: analytic jets and central finite differences.
///
/// The finite-difference engine walks the four real coordinates of C^2 with
/// second-order central stencils and converts to Wirtinger derivatives via
///   u_{z^j}        = (u_{x_j} - i u_{y_j}) / 2,
///   u_{z^j zbar^k} = ((u_{x_j x_k} + u_{y_j y_k}) + i (u_{x_j y_k} - u_{y_j x_k})) / 4,
///   u_{z^j z^k}    = ((u_{x_j x_k} - u_{y_j y_k}) - i (u_{x_j y_k} + u_{y_j x_k})) / 4,
/// where (x_j, y_j) are the real and imaginary parts of z^j.  Mixed real
/// partials come from the symmetric four-point cross stencil, so the
/// numerical Hessian is exactly symmetric and the assembled hessH exactly
/// Hermitian (up to rounding in the conversions).

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/field.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

/// Finite-difference engine parameters.
struct FdSpec {
  double h = 1e-4;          ///< base step on each real coordinate
  bool richardson = false;  ///< extrapolate (4 J_{h/2} - J_h) / 3
};

/// Closed-form jet of a field.  Throws NotAvailable when the field carries
/// no closed-form derivative data.
inline Jet2 analytic_jet(const ScalarField& field, const CxPoint& p) {
  const std::optional<Jet2> jet = field.closed_form_jet(p);
  if (!jet) {
    throw NotAvailable("analytic_jet: field '" + field.info().name +
                       "' has no closed-form derivatives");
  }
  return *jet;
}

namespace detail {

/// One central-difference pass at step h.  Assumes the stencil was already
/// validated by the caller.
inline Jet2 fd_jet_pass(const ScalarField& field, const CxPoint& p, double h) {
  const double u0 = field.eval(p);

  // First derivatives and diagonal second derivatives along real axes.
  std::array<double, 4> grad{};
  std::array<std::array<double, 4>, 4> hess{};
  for (int i = 0; i < 4; ++i) {
    const double up = field.eval(shift_real_coord(p, i, +h));
    const double um = field.eval(shift_real_coord(p, i, -h));
    grad[static_cast<std::size_t>(i)] = (up - um) / (2.0 * h);
    hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
        (up - 2.0 * u0 + um) / (h * h);
  }

  // Mixed second derivatives from the symmetric cross stencil.
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double upp = field.eval(shift_real_coord(shift_real_coord(p, i, +h), j, +h));
      const double upm = field.eval(shift_real_coord(shift_real_coord(p, i, +h), j, -h));
      const double ump = field.eval(shift_real_coord(shift_real_coord(p, i, -h), j, +h));
      const double umm = field.eval(shift_real_coord(shift_real_coord(p, i, -h), j, -h));
      const double dij = (upp - upm - ump + umm) / (4.0 * h * h);
      hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dij;
      hess[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = dij;
    }
  }

  const auto d2 = [&hess](int i, int j) {
    return hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };

  Jet2 jet;
  jet.u = u0;
  // Real coordinate indices: x_0 = 0, y_0 = 1, x_1 = 2, y_1 = 3.
  jet.du[0] = 0.5 * cx(grad[0], -grad[1]);
  jet.du[1] = 0.5 * cx(grad[2], -grad[3]);

  jet.hessH.a00 = 0.25 * (d2(0, 0) + d2(1, 1));
  jet.hessH.a11 = 0.25 * (d2(2, 2) + d2(3, 3));
  jet.hessH.a01 = 0.25 * cx(d2(0, 2) + d2(1, 3), d2(0, 3) - d2(1, 2));

  jet.hessHol.a00 = 0.25 * cx(d2(0, 0) - d2(1, 1), -2.0 * d2(0, 1));
  jet.hessHol.a01 = 0.25 * cx(d2(0, 2) - d2(1, 3), -(d2(0, 3) + d2(1, 2)));
  jet.hessHol.a11 = 0.25 * cx(d2(2, 2) - d2(3, 3), -2.0 * d2(2, 3));
  return jet;
}

inline Jet2 jet_richardson(const Jet2& coarse, const Jet2& fine) {
  const auto mix = [](cx c, cx f) { return (4.0 * f - c) / 3.0; };
  Jet2 jet;
  jet.u = fine.u;
  jet.du[0] = mix(coarse.du[0], fine.du[0]);
  jet.du[1] = mix(coarse.du[1], fine.du[1]);
  jet.hessH.a00 = mix(coarse.hessH.a00, fine.hessH.a00).real();
  jet.hessH.a11 = mix(coarse.hessH.a11, fine.hessH.a11).real();
  jet.hessH.a01 = mix(coarse.hessH.a01, fine.hessH.a01);
  jet.hessHol.a00 = mix(coarse.hessHol.a00, fine.hessHol.a00);
  jet.hessHol.a01 = mix(coarse.hessHol.a01, fine.hessHol.a01);
  jet.hessHol.a11 = mix(coarse.hessHol.a11, fine.hessHol.a11);
  return jet;
}

}  // namespace detail

/// Central-difference jet at p.  The full stencil (including the diagonal
/// cross points) stays within distance 2h of p; the call refuses stencils
/// that could touch the origin or leave the domain ball, where catalog
/// fields may be singular.
inline Jet2 fd_jet(const ScalarField& field, const CxPoint& p,
                   const FdSpec& spec = {}) {
  if (!(spec.h > 0.0)) throw BadParams("fd_jet: step h must be positive");
  const double r = p.abs();
  const double reach = 2.0 * spec.h;
  if (r <= reach) {
    throw StencilOutsideDomain("fd_jet: stencil around |z| = " + std::to_string(r) +
                               " with h = " + std::to_string(spec.h) +
                               " may touch the origin");
  }
  if (r + reach >= field.info().domain_radius) {
    throw StencilOutsideDomain("fd_jet: stencil around |z| = " + std::to_string(r) +
                               " leaves the domain ball");
  }
  const Jet2 coarse = detail::fd_jet_pass(field, p, spec.h);
  if (!spec.richardson) return coarse;
  const Jet2 fine = detail::fd_jet_pass(field, p, 0.5 * spec.h);
  return detail::jet_richardson(coarse, fine);
}

/// Preferred jet: closed form when available, finite differences otherwise.
inline Jet2 jet_of(const ScalarField& field, const CxPoint& p,
                   const FdSpec& spec = {}) {
  if (const std::optional<Jet2> jet = field.closed_form_jet(p)) return *jet;
  return fd_jet(field, p, spec);
}

}  // namespace pshlab
