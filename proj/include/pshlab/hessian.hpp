#pragma once

/// \file hessian.hpp
/// \brief The transverse (Sasakian) Hessian of a field on C^2 \ {0},
/// computed by two independent routes, plus a positivity checker.
///
/// The Hessian is the 2x2 Hermitian matrix S(u) with entries
///   S_ab = X_a X_bbar u + correction,
/// in the frame (X_0, X_1) of the principal chart:
///
///   s00 = X_0 X_0bar u + (2r)^{-1} X_0bar u
///       = (u_tt + 4 u_thetatheta) / (4 r^2),
///   s11 = X_1 X_1bar u + r (X_0bar u) h_zz
///       = u_zetazetabar + (u_t/2) h_zz
///         + i (h_zeta u_thetazetabar - h_zetabar u_thetazeta)
///         + |h_zeta|^2 u_thetatheta,
///   s10 = X_1 X_0bar u
///       = (1/2r) { u_tzeta - 2 h_zeta u_thetatheta
///                  + i (2 u_thetazeta + h_zeta u_ttheta) },
///   s01 = conj(s10)  (u real),
///
/// with h_zz = h_{zeta zetabar}.  Equivalently S is the congruence
/// S_AB = sum_jk V_A^j conj(V_B^k) u_{j kbar} with V_0 = (z^0/r, z^1/r)
/// and V_1 = (z^0/w^2)(-zetabar, 1): the first-order correction terms are
/// exactly what the congruence produces from differentiating the frame
/// coefficients, so both routes agree identically and S is positive
/// semidefinite precisely when the full complex Hessian is (V is
/// invertible wherever z^0 != 0).

#include <cmath>
#include <complex>
#include <vector>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/field.hpp"
#include "pshlab/hopf.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

/// Transverse Hessian entries in the frame (X_0, X_1), plus the radial
/// frame derivatives they are usually consumed with.
struct SasakiHessian {
  double s00 = 0.0;
  double s11 = 0.0;
  cx s01{0.0, 0.0};  ///< equals conj(s10) for real fields
  cx s10{0.0, 0.0};
  cx rX0u{0.0, 0.0};
  cx rX0bar_u{0.0, 0.0};

  double trace() const { return s00 + s11; }
  double det() const { return s00 * s11 - std::norm(s01); }
  double eig_min() const {
    const double mean = 0.5 * (s00 + s11);
    const double gap = 0.5 * (s00 - s11);
    return mean - std::sqrt(gap * gap + std::norm(s01));
  }
  double eig_max() const {
    const double mean = 0.5 * (s00 + s11);
    const double gap = 0.5 * (s00 - s11);
    return mean + std::sqrt(gap * gap + std::norm(s01));
  }
};

/// Route A: from principal-chart Hopf partials.  The frame expressions
/// above use the principal fiber angle, so the jet must come from the
/// principal chart.
inline SasakiHessian sasaki_hessian_hopf(const FrameJet& fj) {
  if (fj.chart != Chart::Principal) {
    throw BadParams("sasaki_hessian_hopf: frame jet must be principal-chart");
  }
  const BasicH bh = basic_h(fj.zeta);
  const double r2 = fj.r * fj.r;
  SasakiHessian s;
  s.s00 = (fj.u_tt + 4.0 * fj.u_thetatheta) / (4.0 * r2);

  const cx u_thetazetabar = std::conj(fj.u_thetazeta);
  const cx s11_cx = fj.u_zetazetabar + 0.5 * fj.u_t * bh.h_zetazetabar +
                    cx(0.0, 1.0) * (bh.h_zeta * u_thetazetabar -
                                    std::conj(bh.h_zeta) * fj.u_thetazeta) +
                    std::norm(bh.h_zeta) * fj.u_thetatheta;
  s.s11 = s11_cx.real();

  s.s10 = (fj.u_tzeta - 2.0 * bh.h_zeta * fj.u_thetatheta +
           cx(0.0, 1.0) * (2.0 * fj.u_thetazeta + bh.h_zeta * fj.u_ttheta)) /
          (2.0 * fj.r);
  s.s01 = std::conj(s.s10);
  s.rX0u = fj.rX0u;
  s.rX0bar_u = fj.rX0bar_u;
  return s;
}

/// Route B: congruence of the Cartesian complex Hessian by the frame
/// coefficient matrix, S_AB = sum_jk V_A^j conj(V_B^k) u_{j kbar}.
inline SasakiHessian sasaki_hessian_cartesian(const Jet2& jet,
                                              const CxPoint& z) {
  if (z.z0 == cx(0.0, 0.0)) {
    throw ChartSingular(
        "sasaki_hessian_cartesian: z^0 = 0 is outside the principal chart");
  }
  const double r = z.abs();
  const cx zeta = z.z1 / z.z0;
  const double w2 = 1.0 + std::norm(zeta);
  const cx V[2][2] = {
      {z.z0 / r, z.z1 / r},
      {-std::conj(zeta) * z.z0 / w2, z.z0 / w2},
  };
  cx s[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (int A = 0; A < 2; ++A) {
    for (int B = 0; B < 2; ++B) {
      cx acc = 0.0;
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          acc += V[A][j] * std::conj(V[B][k]) * jet.hessH.at(j, k);
        }
      }
      s[A][B] = acc;
    }
  }
  SasakiHessian out;
  out.s00 = s[0][0].real();
  out.s11 = s[1][1].real();
  out.s10 = s[1][0];
  out.s01 = s[0][1];
  const cx rx0 = z.z0 * jet.d(0) + z.z1 * jet.d(1);
  out.rX0u = rx0;
  out.rX0bar_u = std::conj(rx0);
  return out;
}

/// Convenience: route B at a Hopf point through the embedding.
inline SasakiHessian sasaki_hessian_cartesian(const ScalarField& field,
                                              const HopfPoint& p,
                                              const FdSpec& engine = {}) {
  const CxPoint z = embed(p);
  return sasaki_hessian_cartesian(jet_of(field, z, engine), z);
}

/// Positivity survey of a field over sample points: minimum eigenvalue of
/// the transverse Hessian (route A) and of the Cartesian complex Hessian,
/// and whether the two verdicts (eigenvalue >= -tol) coincide at every
/// sample.
struct PshReport {
  double min_eigen_S = 0.0;
  double min_eigen_cartesian = 0.0;
  bool agree = true;
};

inline PshReport psh_check(const ScalarField& field,
                           const std::vector<HopfPoint>& samples,
                           double tol = 1e-9, const FdSpec& engine = {}) {
  if (samples.empty()) throw BadParams("psh_check: no sample points");
  PshReport report;
  bool first = true;
  for (const HopfPoint& p : samples) {
    const FrameJet fj = frame_apply(field, p, engine);
    const SasakiHessian s = sasaki_hessian_hopf(fj);
    const Jet2 jet = jet_of(field, embed(p), engine);
    const double eig_s = s.eig_min();
    const double eig_c = jet.hessH.eig_min();
    if (first) {
      report.min_eigen_S = eig_s;
      report.min_eigen_cartesian = eig_c;
      first = false;
    } else {
      report.min_eigen_S = std::min(report.min_eigen_S, eig_s);
      report.min_eigen_cartesian = std::min(report.min_eigen_cartesian, eig_c);
    }
    const bool ok_s = eig_s >= -tol;
    const bool ok_c = eig_c >= -tol;
    if (ok_s != ok_c) report.agree = false;
  }
  return report;
}

}  // namespace pshlab
