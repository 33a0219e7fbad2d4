#pragma once

/// \file cxpoint.hpp
/// \brief Points of C^2 and small complex-arithmetic helpers.
///
/// The whole library works on C^2 with coordinates z = (z^0, z^1).  A point
/// is also viewed as a vector of four real coordinates
/// (Re z^0, Im z^0, Re z^1, Im z^1) when finite differences need to walk
/// along real axes.

#include <cmath>
#include <complex>

namespace pshlab {

using cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A point (or tangent vector) of C^2.
struct CxPoint {
  cx z0{0.0, 0.0};
  cx z1{0.0, 0.0};

  /// Squared Euclidean norm |z^0|^2 + |z^1|^2.
  double abs2() const { return std::norm(z0) + std::norm(z1); }

  /// Euclidean norm |z|.
  double abs() const { return std::sqrt(abs2()); }
};

/// Coordinate access by holomorphic index j in {0, 1}.
inline cx coord(const CxPoint& p, int j) { return j == 0 ? p.z0 : p.z1; }

inline CxPoint operator+(const CxPoint& a, const CxPoint& b) {
  return {a.z0 + b.z0, a.z1 + b.z1};
}

inline CxPoint operator-(const CxPoint& a, const CxPoint& b) {
  return {a.z0 - b.z0, a.z1 - b.z1};
}

inline CxPoint operator*(double s, const CxPoint& p) {
  return {s * p.z0, s * p.z1};
}

inline CxPoint operator*(cx s, const CxPoint& p) {
  return {s * p.z0, s * p.z1};
}

/// Real coordinate i in {0,1,2,3} = (Re z^0, Im z^0, Re z^1, Im z^1).
inline double real_coord(const CxPoint& p, int i) {
  switch (i) {
    case 0: return p.z0.real();
    case 1: return p.z0.imag();
    case 2: return p.z1.real();
    default: return p.z1.imag();
  }
}

/// Copy of p with real coordinate i replaced by v.
inline CxPoint with_real_coord(CxPoint p, int i, double v) {
  switch (i) {
    case 0: p.z0 = cx(v, p.z0.imag()); break;
    case 1: p.z0 = cx(p.z0.real(), v); break;
    case 2: p.z1 = cx(v, p.z1.imag()); break;
    default: p.z1 = cx(p.z1.real(), v); break;
  }
  return p;
}

/// Copy of p with real coordinate i shifted by dv.
inline CxPoint shift_real_coord(const CxPoint& p, int i, double dv) {
  return with_real_coord(p, i, real_coord(p, i) + dv);
}

}  // namespace pshlab
