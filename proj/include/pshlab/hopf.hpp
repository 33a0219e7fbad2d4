#pragma once

/// \file hopf.hpp
/// \brief Hopf-coordinate charts on C^2 minus the origin, the basic function
/// h, Sasakian frame/coframe evaluation, and a commutator self-test.
///
/// Geometry conventions used throughout the library:
///
///  * Principal chart: (r, theta, zeta) embeds as
///      z^0 = r e^{i theta/2} rho / w,   z^1 = zeta z^0,
///    with w = (1 + |zeta|^2)^{1/2} and rho = (zetabar/|zeta|)^{1/2}
///    (principal square root, so zeta must stay off the closed negative
///    real axis and off 0).  theta has period 4 pi and d z^j / d theta =
///    (i/2) z^j.  The fiber coordinate zeta equals z^1/z^0.
///
///  * Simple chart: (r, theta', zeta) embeds as
///      z^0 = r e^{i theta'} zeta / w,   z^1 = r e^{i theta'} / w,
///    theta' has period 2 pi and d z^j / d theta' = i z^j.  Here zeta
///    equals z^0/z^1.  Both charts satisfy |embed| = r exactly.
///
///  * Basic function (principal chart): h = log(1+|zeta|^2) - log|zeta|,
///    whose mixed derivative h_{zeta zetabar} = (1+|zeta|^2)^{-2} is the
///    Fubini-Study density (the -log|zeta| part is harmonic off 0).
///
///  * Frames (principal chart): X_0 = (d_r - 2 i r^{-1} d_theta)/2, which
///    in ambient terms is sum_j (z^j/r) d_{z^j}; X_1 = d_zeta +
///    i h_zeta d_theta = (z^0/w^2)(-zetabar d_{z^0} + d_{z^1}); the Reeb
///    field xi_0 = -2 d_theta; the contact form eta_0 pairs radial and
///    fiber directions; the coframe {lambda^0 = dr - i r eta_0, d zeta}
///    is dual to (X_0, X_1).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/field.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

enum class Chart { Principal, Simple };

/// A point in Hopf coordinates.  theta is the chart's own fiber angle:
/// period 4 pi in the principal chart, 2 pi in the simple chart.
struct HopfPoint {
  double r = 1.0;
  double theta = 0.0;
  cx zeta{0.0, 0.0};
  Chart chart = Chart::Principal;
};

namespace detail {

/// True when zeta sits on the principal chart's excluded set: the origin or
/// the closed negative real axis (branch cut of the principal square root).
inline bool on_principal_cut(cx zeta) {
  if (zeta == cx(0.0, 0.0)) return true;
  return zeta.imag() == 0.0 && zeta.real() < 0.0;
}

}  // namespace detail

/// First and second chart derivatives of the embedding z^j(t, theta, zeta,
/// zetabar), where t = log r.  Both embeddings factor as
/// z^j = e^t e^{c theta} G^j(zeta, zetabar) with a constant angle rate c
/// (c = i/2 principal, c = i simple), so every t- or theta-derivative is
/// multiplicative: d_t X = X and d_theta X = c X for each table entry X.
struct ChartJet {
  std::array<cx, 2> z;      ///< z^j
  std::array<cx, 2> dz;     ///< d z^j / d zeta
  std::array<cx, 2> dzb;    ///< d z^j / d zetabar
  std::array<cx, 2> dzz;    ///< d^2 z^j / d zeta^2
  std::array<cx, 2> dzzb;   ///< d^2 z^j / d zeta d zetabar
  std::array<cx, 2> dzbzb;  ///< d^2 z^j / d zetabar^2
  cx c;                     ///< fiber angle rate: d z^j / d theta = c z^j
};

/// Embedding derivative tables for p's chart at p.
inline ChartJet chart_jet(const HopfPoint& p) {
  if (!(p.r > 0.0)) throw BadParams("chart_jet: r must be positive");
  const cx zeta = p.zeta;
  const double a2 = std::norm(zeta);
  const double w2 = 1.0 + a2;
  const double w = std::sqrt(w2);
  ChartJet cj;

  if (p.chart == Chart::Principal) {
    if (detail::on_principal_cut(zeta)) {
      throw ChartSingular("chart_jet: zeta on the principal-chart cut");
    }
    // z^0 = C e^l with C = r e^{i theta/2} and
    // l = (log zetabar - log zeta)/4 - log(1+zeta zetabar)/2, so that
    // e^l = rho / w with rho = e^{-i arg(zeta)/2}.
    const cx rho = std::polar(1.0, -0.5 * std::arg(zeta));
    const cx z0 = std::polar(p.r / w, 0.5 * p.theta) * rho;
    const cx lz = -1.0 / (4.0 * zeta) - std::conj(zeta) / (2.0 * w2);
    const cx lzb = 1.0 / (4.0 * std::conj(zeta)) - zeta / (2.0 * w2);
    const cx lzz = 1.0 / (4.0 * zeta * zeta) +
                   std::conj(zeta) * std::conj(zeta) / (2.0 * w2 * w2);
    const cx lzzb = cx(-1.0 / (2.0 * w2 * w2), 0.0);
    const cx lzbzb = -1.0 / (4.0 * std::conj(zeta) * std::conj(zeta)) +
                     zeta * zeta / (2.0 * w2 * w2);
    const cx d0 = z0 * lz;
    const cx d0b = z0 * lzb;
    const cx d0zz = z0 * (lz * lz + lzz);
    const cx d0zzb = z0 * (lz * lzb + lzzb);
    const cx d0bb = z0 * (lzb * lzb + lzbzb);
    cj.z = {z0, zeta * z0};
    cj.dz = {d0, z0 + zeta * d0};
    cj.dzb = {d0b, zeta * d0b};
    cj.dzz = {d0zz, 2.0 * d0 + zeta * d0zz};
    cj.dzzb = {d0zzb, d0b + zeta * d0zzb};
    cj.dzbzb = {d0bb, zeta * d0bb};
    cj.c = cx(0.0, 0.5);
    return cj;
  }

  // Simple chart: z^1 = C e^m with C = r e^{i theta} and
  // m = -log(1+zeta zetabar)/2, so e^m = 1/w.
  const cx z1 = std::polar(p.r / w, p.theta);
  const cx mz = -std::conj(zeta) / (2.0 * w2);
  const cx mzb = -zeta / (2.0 * w2);
  const cx mzz = std::conj(zeta) * std::conj(zeta) / (2.0 * w2 * w2);
  const cx mzzb = cx(-1.0 / (2.0 * w2 * w2), 0.0);
  const cx mzbzb = zeta * zeta / (2.0 * w2 * w2);
  const cx d1 = z1 * mz;
  const cx d1b = z1 * mzb;
  const cx d1zz = z1 * (mz * mz + mzz);
  const cx d1zzb = z1 * (mz * mzb + mzzb);
  const cx d1bb = z1 * (mzb * mzb + mzbzb);
  cj.z = {zeta * z1, z1};
  cj.dz = {z1 + zeta * d1, d1};
  cj.dzb = {zeta * d1b, d1b};
  cj.dzz = {2.0 * d1 + zeta * d1zz, d1zz};
  cj.dzzb = {d1b + zeta * d1zzb, d1zzb};
  cj.dzbzb = {zeta * d1bb, d1bb};
  cj.c = cx(0.0, 1.0);
  return cj;
}

/// Cartesian image of a Hopf point; |embed(p)| = p.r up to rounding.
inline CxPoint embed(const HopfPoint& p) {
  const ChartJet cj = chart_jet(p);
  return {cj.z[0], cj.z[1]};
}

/// The simple-chart point describing the same geometric point as a
/// principal-chart point: zeta inverts and the fiber angles match through
/// theta' = theta/2 + arg(zeta)/2 (then the embeddings agree exactly).
inline HopfPoint matching_simple_point(const HopfPoint& principal) {
  if (principal.chart != Chart::Principal) {
    throw BadParams("matching_simple_point: input must be a principal-chart point");
  }
  if (detail::on_principal_cut(principal.zeta)) {
    throw ChartSingular("matching_simple_point: zeta on the principal-chart cut");
  }
  HopfPoint q;
  q.r = principal.r;
  q.theta = 0.5 * principal.theta + 0.5 * std::arg(principal.zeta);
  q.zeta = 1.0 / principal.zeta;
  q.chart = Chart::Simple;
  return q;
}

/// Basic function of the principal chart and its derivatives.
struct BasicH {
  double h = 0.0;
  cx h_zeta{0.0, 0.0};
  double h_zetazetabar = 0.0;
};

/// h = log(1+|zeta|^2) - log|zeta| with h_zeta = zetabar/(1+|zeta|^2) -
/// 1/(2 zeta) and h_{zeta zetabar} = (1+|zeta|^2)^{-2}.
inline BasicH basic_h(cx zeta) {
  if (zeta == cx(0.0, 0.0)) {
    throw ChartSingular("basic_h: zeta = 0 is singular");
  }
  const double a2 = std::norm(zeta);
  const double w2 = 1.0 + a2;
  BasicH out;
  out.h = std::log(w2) - 0.5 * std::log(a2);
  out.h_zeta = std::conj(zeta) / w2 - 1.0 / (2.0 * zeta);
  out.h_zetazetabar = 1.0 / (w2 * w2);
  return out;
}

/// All Hopf partial derivatives of a field needed by the Sasakian Hessian,
/// expressed in the chart's own coordinates (t = log r, the chart's own
/// fiber angle theta, and zeta).  Also carries the frame derivatives
/// r X_0 u = (u_t - 2 i u_theta^P)/2 and r X_0bar u = (u_t + 2 i u_theta^P)/2,
/// where u_theta^P is the derivative in the principal-normalized angle
/// (equal to u_theta in the principal chart and to u_theta/2 in the simple
/// chart, whose angle advances twice as fast along the fiber).
struct FrameJet {
  double r = 1.0;
  double theta = 0.0;
  cx zeta{0.0, 0.0};
  Chart chart = Chart::Principal;

  double u = 0.0;
  double u_t = 0.0;
  double u_theta = 0.0;
  cx u_zeta{0.0, 0.0};
  double u_tt = 0.0;
  double u_thetatheta = 0.0;
  double u_ttheta = 0.0;
  cx u_tzeta{0.0, 0.0};
  cx u_thetazeta{0.0, 0.0};
  double u_zetazetabar = 0.0;

  cx rX0u{0.0, 0.0};
  cx rX0bar_u{0.0, 0.0};
};

namespace detail {

/// A derivation direction in chart coordinates expressed through ambient
/// coefficients: d_a = sum_j A^j d_{z^j} + B^j d_{zbar^j}.  Real directions
/// (t, theta) have B = conj(A); the Wirtinger directions d_zeta and
/// d_zetabar do not.
struct Dir {
  std::array<cx, 2> A{};
  std::array<cx, 2> B{};
};

/// First derivative of u along dir.
inline cx apply_dir(const Dir& dir, const Jet2& jet) {
  cx out = 0.0;
  for (int j = 0; j < 2; ++j) {
    out += dir.A[static_cast<std::size_t>(j)] * jet.d(j) +
           dir.B[static_cast<std::size_t>(j)] * jet.dbar(j);
  }
  return out;
}

/// Second derivative d_a d_b u.  dAb_dBb holds the a-derivatives of b's
/// coefficient fields; the product rule contributes them against first
/// derivatives, plus two-index sums against both Hessians:
///   u_ab = sum_j (d_a A_b^j) u_j + (d_a B_b^j) u_jbar
///        + sum_{jk} A_b^j (A_a^k u_{jk} + B_a^k u_{j kbar})
///        + sum_{jk} B_b^j (A_a^k u_{k jbar} + B_a^k conj(u_{jk})).
inline cx apply_dir2(const Dir& a, const Dir& b, const Dir& dAb_dBb,
                     const Jet2& jet) {
  cx out = 0.0;
  for (int j = 0; j < 2; ++j) {
    out += dAb_dBb.A[static_cast<std::size_t>(j)] * jet.d(j) +
           dAb_dBb.B[static_cast<std::size_t>(j)] * jet.dbar(j);
    for (int k = 0; k < 2; ++k) {
      const cx Aa = a.A[static_cast<std::size_t>(k)];
      const cx Ba = a.B[static_cast<std::size_t>(k)];
      out += b.A[static_cast<std::size_t>(j)] *
             (Aa * jet.hessHol.at(j, k) + Ba * jet.hessH.at(j, k));
      out += b.B[static_cast<std::size_t>(j)] *
             (Aa * jet.hessH.at(k, j) + Ba * std::conj(jet.hessHol.at(j, k)));
    }
  }
  return out;
}

}  // namespace detail

/// All Hopf partials of the field at p via the chain rule through the
/// embedding derivative tables (no differencing across the fiber angle).
inline FrameJet frame_apply(const ScalarField& field, const HopfPoint& p,
                            const FdSpec& engine = {}) {
  const ChartJet cj = chart_jet(p);
  const CxPoint z{cj.z[0], cj.z[1]};
  const Jet2 jet = jet_of(field, z, engine);
  const cx c = cj.c;

  detail::Dir t_dir, th_dir, ze_dir, zb_dir;
  for (std::size_t j = 0; j < 2; ++j) {
    t_dir.A[j] = cj.z[j];
    t_dir.B[j] = std::conj(cj.z[j]);
    th_dir.A[j] = c * cj.z[j];
    th_dir.B[j] = std::conj(c * cj.z[j]);
    ze_dir.A[j] = cj.dz[j];
    ze_dir.B[j] = std::conj(cj.dzb[j]);
    zb_dir.A[j] = cj.dzb[j];
    zb_dir.B[j] = std::conj(cj.dz[j]);
  }

  // a-derivatives of b-coefficients.  Homogeneity in r makes every
  // t-derivative the identity; the fiber phase makes every theta-derivative
  // a multiplication by c (conjugated on B-parts).
  detail::Dir dt_t, dth_th, dt_th, dt_ze, dth_ze, dzb_ze;
  for (std::size_t j = 0; j < 2; ++j) {
    dt_t.A[j] = cj.z[j];
    dt_t.B[j] = std::conj(cj.z[j]);
    dth_th.A[j] = c * c * cj.z[j];
    dth_th.B[j] = std::conj(c * c * cj.z[j]);
    dt_th.A[j] = c * cj.z[j];
    dt_th.B[j] = std::conj(c * cj.z[j]);
    dt_ze.A[j] = cj.dz[j];
    dt_ze.B[j] = std::conj(cj.dzb[j]);
    dth_ze.A[j] = c * cj.dz[j];
    dth_ze.B[j] = std::conj(c * cj.dzb[j]);
    dzb_ze.A[j] = cj.dzzb[j];
    dzb_ze.B[j] = std::conj(cj.dzzb[j]);
  }

  FrameJet fj;
  fj.r = p.r;
  fj.theta = p.theta;
  fj.zeta = p.zeta;
  fj.chart = p.chart;
  fj.u = jet.u;
  fj.u_t = detail::apply_dir(t_dir, jet).real();
  fj.u_theta = detail::apply_dir(th_dir, jet).real();
  fj.u_zeta = detail::apply_dir(ze_dir, jet);
  fj.u_tt = detail::apply_dir2(t_dir, t_dir, dt_t, jet).real();
  fj.u_thetatheta = detail::apply_dir2(th_dir, th_dir, dth_th, jet).real();
  fj.u_ttheta = detail::apply_dir2(t_dir, th_dir, dt_th, jet).real();
  fj.u_tzeta = detail::apply_dir2(t_dir, ze_dir, dt_ze, jet);
  fj.u_thetazeta = detail::apply_dir2(th_dir, ze_dir, dth_ze, jet);
  fj.u_zetazetabar = detail::apply_dir2(zb_dir, ze_dir, dzb_ze, jet).real();

  const double u_theta_p =
      (p.chart == Chart::Simple) ? 0.5 * fj.u_theta : fj.u_theta;
  fj.rX0u = 0.5 * cx(fj.u_t, -2.0 * u_theta_p);
  fj.rX0bar_u = 0.5 * cx(fj.u_t, 2.0 * u_theta_p);
  return fj;
}

// ---------------------------------------------------------------------------
// Frames and coframes as ambient objects (principal chart)
// ---------------------------------------------------------------------------

/// A complex vector at a point: v = sum_j a^j d_{z^j} + b^j d_{zbar^j}.
/// Real tangent vectors have b = conj(a).
struct AmbientVec {
  std::array<cx, 2> a{};
  std::array<cx, 2> b{};
};

/// X_0 = sum_j (z^j / r) d_{z^j} at the embedded point of p.
inline AmbientVec frame_x0(const HopfPoint& p) {
  const CxPoint z = embed(p);
  AmbientVec v;
  v.a = {z.z0 / p.r, z.z1 / p.r};
  v.b = {cx(0.0, 0.0), cx(0.0, 0.0)};
  return v;
}

/// X_1 = (z^0 / w^2) (-zetabar d_{z^0} + d_{z^1}) at the embedded point
/// (principal chart only).
inline AmbientVec frame_x1(const HopfPoint& p) {
  if (p.chart != Chart::Principal) {
    throw BadParams("frame_x1: frames are defined in the principal chart");
  }
  const CxPoint z = embed(p);
  const double w2 = 1.0 + std::norm(p.zeta);
  AmbientVec v;
  v.a = {-std::conj(p.zeta) * z.z0 / w2, z.z0 / w2};
  v.b = {cx(0.0, 0.0), cx(0.0, 0.0)};
  return v;
}

/// Conjugate vector (swaps holomorphic and antiholomorphic parts).
inline AmbientVec conj_vec(const AmbientVec& v) {
  AmbientVec w;
  w.a = {std::conj(v.b[0]), std::conj(v.b[1])};
  w.b = {std::conj(v.a[0]), std::conj(v.a[1])};
  return w;
}

/// The Reeb field xi_0 = -2 d_theta = sum_j (-i z^j) d_{z^j} + conj.
inline AmbientVec reeb_field(const CxPoint& z) {
  AmbientVec v;
  v.a = {cx(0.0, -1.0) * z.z0, cx(0.0, -1.0) * z.z1};
  v.b = {std::conj(v.a[0]), std::conj(v.a[1])};
  return v;
}

/// dr(v) = (sum_j zbar^j a^j + z^j b^j) / (2r).
inline cx form_dr(const CxPoint& z, const AmbientVec& v) {
  const cx s = std::conj(z.z0) * v.a[0] + std::conj(z.z1) * v.a[1];
  const cx sb = z.z0 * v.b[0] + z.z1 * v.b[1];
  return (s + sb) / (2.0 * z.abs());
}

/// eta_0(v) = i (sum_j zbar^j a^j - sum_j z^j b^j) / (2 r^2); pairs to 1
/// against the Reeb field and kills X_1, X_1bar.
inline cx form_eta0(const CxPoint& z, const AmbientVec& v) {
  const cx s = std::conj(z.z0) * v.a[0] + std::conj(z.z1) * v.a[1];
  const cx sb = z.z0 * v.b[0] + z.z1 * v.b[1];
  return cx(0.0, 1.0) * (s - sb) / (2.0 * z.abs2());
}

/// lambda^0 = dr - i r eta_0 (dual to X_0).
inline cx form_lambda0(const CxPoint& z, const AmbientVec& v) {
  return form_dr(z, v) - cx(0.0, 1.0) * z.abs() * form_eta0(z, v);
}

/// d zeta (principal chart, zeta = z^1/z^0) = (dz^1 - zeta dz^0)/z^0; a
/// (1,0)-form, so only the holomorphic components of v contribute.
inline cx form_dzeta(const CxPoint& z, const AmbientVec& v) {
  if (z.z0 == cx(0.0, 0.0)) {
    throw ChartSingular("form_dzeta: z^0 = 0 is outside the principal chart");
  }
  const cx zeta = z.z1 / z.z0;
  return (v.a[1] - zeta * v.a[0]) / z.z0;
}

/// Directional derivative of u along v from a Cartesian jet.
inline cx directional_derivative(const AmbientVec& v, const Jet2& jet) {
  return v.a[0] * jet.d(0) + v.a[1] * jet.d(1) + v.b[0] * jet.dbar(0) +
         v.b[1] * jet.dbar(1);
}

// ---------------------------------------------------------------------------
// Commutator self-test
// ---------------------------------------------------------------------------

/// Maximum absolute defects of the frame commutator identities over a
/// sample set:
///   [X_1, X_1bar] u = i h_{zeta zetabar} xi_0 u,
///   [X_0, X_0bar] u = -i r^{-2} u_theta,
///   [X_1, X_0] u = 0,  [X_1, d_r] u = 0,  [X_1, d_theta] u = 0.
struct CommutatorReport {
  double x1_x1bar = 0.0;
  double x0_x0bar = 0.0;
  double x1_x0 = 0.0;
  double x1_dr = 0.0;
  double x1_dtheta = 0.0;
  double max_defect = 0.0;
};

namespace detail {

enum class InnerOp { X0, X0bar, X1, X1bar, Dr, Dtheta };

/// Exact first-order directional derivative of the field at a Hopf point —
/// the inner layer of the nested commutator difference.
inline cx inner_apply(const ScalarField& field, const HopfPoint& q, InnerOp op,
                      const FdSpec& engine) {
  const CxPoint z = embed(q);
  const Jet2 jet = jet_of(field, z, engine);
  switch (op) {
    case InnerOp::X0:
      return directional_derivative(frame_x0(q), jet);
    case InnerOp::X0bar:
      return directional_derivative(conj_vec(frame_x0(q)), jet);
    case InnerOp::X1:
      return directional_derivative(frame_x1(q), jet);
    case InnerOp::X1bar:
      return directional_derivative(conj_vec(frame_x1(q)), jet);
    case InnerOp::Dr:
      // d_r u = u_t / r.
      return cx(radial_log_derivative(jet, z) / q.r, 0.0);
    case InnerOp::Dtheta:
    default: {
      // d_theta u = 2 Re sum_j (i/2) z^j u_j = -Im sum_j z^j u_j
      // (principal angle).
      const cx s = z.z0 * jet.d(0) + z.z1 * jet.d(1);
      return cx(-s.imag(), 0.0);
    }
  }
}

/// Outer central differences of a complex chart function F at step h.
struct OuterDiff {
  std::function<cx(const HopfPoint&)> F;
  double h;

  cx d_r(const HopfPoint& q) const {
    HopfPoint qp = q, qm = q;
    qp.r += h;
    qm.r -= h;
    return (F(qp) - F(qm)) / (2.0 * h);
  }
  cx d_theta(const HopfPoint& q) const {
    HopfPoint qp = q, qm = q;
    qp.theta += h;
    qm.theta -= h;
    return (F(qp) - F(qm)) / (2.0 * h);
  }
  cx d_zeta(const HopfPoint& q) const {
    HopfPoint qxp = q, qxm = q, qyp = q, qym = q;
    qxp.zeta += cx(h, 0.0);
    qxm.zeta -= cx(h, 0.0);
    qyp.zeta += cx(0.0, h);
    qym.zeta -= cx(0.0, h);
    const cx fx = (F(qxp) - F(qxm)) / (2.0 * h);
    const cx fy = (F(qyp) - F(qym)) / (2.0 * h);
    return 0.5 * (fx - cx(0.0, 1.0) * fy);
  }
  cx d_zetabar(const HopfPoint& q) const {
    HopfPoint qxp = q, qxm = q, qyp = q, qym = q;
    qxp.zeta += cx(h, 0.0);
    qxm.zeta -= cx(h, 0.0);
    qyp.zeta += cx(0.0, h);
    qym.zeta -= cx(0.0, h);
    const cx fx = (F(qxp) - F(qxm)) / (2.0 * h);
    const cx fy = (F(qyp) - F(qym)) / (2.0 * h);
    return 0.5 * (fx + cx(0.0, 1.0) * fy);
  }

  cx x0(const HopfPoint& q) const {
    return 0.5 * (d_r(q) - cx(0.0, 2.0) / q.r * d_theta(q));
  }
  cx x0bar(const HopfPoint& q) const {
    return 0.5 * (d_r(q) + cx(0.0, 2.0) / q.r * d_theta(q));
  }
  cx x1(const HopfPoint& q) const {
    const BasicH bh = basic_h(q.zeta);
    return d_zeta(q) + cx(0.0, 1.0) * bh.h_zeta * d_theta(q);
  }
  cx x1bar(const HopfPoint& q) const {
    const BasicH bh = basic_h(q.zeta);
    return d_zetabar(q) - cx(0.0, 1.0) * std::conj(bh.h_zeta) * d_theta(q);
  }
};

}  // namespace detail

/// Evaluates the frame commutator identities by nested differentiation:
/// inner directional derivatives come exactly from jets; the outer layer is
/// a central difference in chart coordinates with step h.  [A,B]u is formed
/// as A(Bu) - B(Au), applying the outer operator by differencing the inner
/// derivative field.
inline CommutatorReport commutator_selftest(
    const ScalarField& field, const std::vector<HopfPoint>& samples,
    double h = 1e-4, const FdSpec& engine = {}) {
  if (!(h > 0.0)) throw BadParams("commutator_selftest: h must be positive");
  using detail::InnerOp;
  const auto inner = [&field, &engine](InnerOp op) {
    return [&field, &engine, op](const HopfPoint& q) {
      return detail::inner_apply(field, q, op, engine);
    };
  };
  // Each OuterDiff wraps one inner derivative field, named by that field.
  const detail::OuterDiff of_x0{inner(InnerOp::X0), h};
  const detail::OuterDiff of_x0bar{inner(InnerOp::X0bar), h};
  const detail::OuterDiff of_x1{inner(InnerOp::X1), h};
  const detail::OuterDiff of_x1bar{inner(InnerOp::X1bar), h};
  const detail::OuterDiff of_dr{inner(InnerOp::Dr), h};
  const detail::OuterDiff of_dtheta{inner(InnerOp::Dtheta), h};

  CommutatorReport report;
  for (const HopfPoint& p : samples) {
    if (p.chart != Chart::Principal) {
      throw BadParams(
          "commutator_selftest: samples must be principal-chart points");
    }
    const FrameJet fj = frame_apply(field, p, engine);
    const BasicH bh = basic_h(p.zeta);

    // [X1, X1bar] u = X1(X1bar u) - X1bar(X1 u) = i h_{zz} xi_0 u,
    // xi_0 u = -2 u_theta.
    const cx c1 = of_x1bar.x1(p) - of_x1.x1bar(p);
    const cx want1 = cx(0.0, 1.0) * bh.h_zetazetabar * (-2.0 * fj.u_theta);
    const double e1 = std::abs(c1 - want1);

    // [X0, X0bar] u = X0(X0bar u) - X0bar(X0 u) = -i r^{-2} u_theta.
    const cx c2 = of_x0bar.x0(p) - of_x0.x0bar(p);
    const cx want2 = cx(0.0, -1.0) * fj.u_theta / (p.r * p.r);
    const double e2 = std::abs(c2 - want2);

    // [X1, X0] u = 0.
    const cx c3 = of_x0.x1(p) - of_x1.x0(p);
    const double e3 = std::abs(c3);

    // [X1, d_r] u = 0.
    const cx c4 = of_dr.x1(p) - of_x1.d_r(p);
    const double e4 = std::abs(c4);

    // [X1, d_theta] u = 0.
    const cx c5 = of_dtheta.x1(p) - of_x1.d_theta(p);
    const double e5 = std::abs(c5);

    report.x1_x1bar = std::max(report.x1_x1bar, e1);
    report.x0_x0bar = std::max(report.x0_x0bar, e2);
    report.x1_x0 = std::max(report.x1_x0, e3);
    report.x1_dr = std::max(report.x1_dr, e4);
    report.x1_dtheta = std::max(report.x1_dtheta, e5);
  }
  report.max_defect =
      std::max({report.x1_x1bar, report.x0_x0bar, report.x1_x0, report.x1_dr,
                report.x1_dtheta});
  return report;
}

/// Deterministic principal-chart sample points on an annulus, keeping zeta
/// well away from the chart cut and from 0 so central differences in zeta
/// stay inside the chart.
inline std::vector<HopfPoint> random_hopf_samples(int n,
                                                  unsigned seed = 12345u) {
  if (n <= 0) throw BadParams("random_hopf_samples: n must be positive");
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> ur(0.3, 0.8);
  std::uniform_real_distribution<double> uth(0.0, 4.0 * kPi);
  std::uniform_real_distribution<double> umag(0.3, 2.5);
  std::uniform_real_distribution<double> uarg(-0.85 * kPi, 0.85 * kPi);
  std::vector<HopfPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    HopfPoint p;
    p.r = ur(gen);
    p.theta = uth(gen);
    p.zeta = std::polar(umag(gen), uarg(gen));
    p.chart = Chart::Principal;
    out.push_back(p);
  }
  return out;
}

}  // namespace pshlab
