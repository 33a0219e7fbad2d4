#pragma once

/// \file jet.hpp
/// \brief Second-order Wirtinger jets of real scalar functions on C^2.
///
/// For a real-valued u the independent derivative data at a point is
///   du[j]        = u_{z^j}                    (first Wirtinger derivatives),
///   hessH[j][k]  = u_{z^j zbar^k}             (Hermitian mixed Hessian),
///   hessHol[j][k]= u_{z^j z^k}                (symmetric holomorphic Hessian).
/// Conjugate derivatives follow by conjugation: u_{zbar^j} = conj(u_{z^j}),
/// u_{zbar^j zbar^k} = conj(u_{z^j z^k}).  That reality structure is baked
/// into the storage: the Hermitian matrix keeps two real diagonal entries
/// and one off-diagonal complex number; the symmetric matrix keeps three.

#include <array>
#include <cmath>
#include <complex>

#include "pshlab/cxpoint.hpp"

namespace pshlab {

/// 2x2 Hermitian matrix: real diagonal (a00, a11), upper off-diagonal a01.
struct Herm2 {
  double a00 = 0.0;
  double a11 = 0.0;
  cx a01{0.0, 0.0};

  /// Entry (j, k) with the convention at(j, k) = u_{z^j zbar^k}.
  cx at(int j, int k) const {
    if (j == 0 && k == 0) return cx(a00, 0.0);
    if (j == 1 && k == 1) return cx(a11, 0.0);
    if (j == 0 && k == 1) return a01;
    return std::conj(a01);
  }

  double trace() const { return a00 + a11; }
  double det() const { return a00 * a11 - std::norm(a01); }

  /// Closed-form eigenvalues: mean +/- sqrt(((a00-a11)/2)^2 + |a01|^2).
  double eig_min() const {
    const double mean = 0.5 * (a00 + a11);
    const double gap = 0.5 * (a00 - a11);
    return mean - std::sqrt(gap * gap + std::norm(a01));
  }
  double eig_max() const {
    const double mean = 0.5 * (a00 + a11);
    const double gap = 0.5 * (a00 - a11);
    return mean + std::sqrt(gap * gap + std::norm(a01));
  }
};

/// 2x2 complex symmetric matrix (a01 = a10).
struct Sym2 {
  cx a00{0.0, 0.0};
  cx a01{0.0, 0.0};
  cx a11{0.0, 0.0};

  /// Entry (j, k) with the convention at(j, k) = u_{z^j z^k}.
  cx at(int j, int k) const {
    if (j == 0 && k == 0) return a00;
    if (j == 1 && k == 1) return a11;
    return a01;
  }
};

/// Value plus all independent Wirtinger derivatives of order <= 2.
struct Jet2 {
  double u = 0.0;
  std::array<cx, 2> du{cx(0.0, 0.0), cx(0.0, 0.0)};
  Herm2 hessH;
  Sym2 hessHol;

  /// u_{z^j}.
  cx d(int j) const { return du[static_cast<std::size_t>(j)]; }
  /// u_{zbar^j} = conj(u_{z^j}) for real u.
  cx dbar(int j) const { return std::conj(d(j)); }
};

/// Radial logarithmic derivative r u_r = t-derivative of u along t = log r.
/// For real u, r u_r = sum_j (z^j u_j + zbar^j u_jbar) = 2 Re(sum_j z^j u_j).
inline double radial_log_derivative(const Jet2& jet, const CxPoint& p) {
  return 2.0 * (p.z0 * jet.d(0) + p.z1 * jet.d(1)).real();
}

/// Euclidean gradient norm |grad u| = 2 sqrt(|u_{z^0}|^2 + |u_{z^1}|^2).
inline double gradient_norm(const Jet2& jet) {
  return 2.0 * std::sqrt(std::norm(jet.d(0)) + std::norm(jet.d(1)));
}

/// Euclidean Laplacian; for real u it equals 4 (u_{0 0bar} + u_{1 1bar}).
inline double laplacian(const Jet2& jet) { return 4.0 * jet.hessH.trace(); }

}  // namespace pshlab
