#pragma once

/// \file field.hpp
/// \brief The scalar-field abstraction shared by the whole laboratory.
///
/// A ScalarField is a real-valued function on (a punctured ball of) C^2
/// together with optional closed-form jets and descriptive metadata.  The
/// derivative engines live in fd.hpp; this header only fixes the interface.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "pshlab/cxpoint.hpp"
#include "pshlab/jet.hpp"

namespace pshlab {

/// Descriptive metadata for a field.  Optional constants record values that
/// are known exactly for that entry (density at the origin, residual mass,
/// directional Lipschitz bound); functionals that estimate those quantities
/// test themselves against these when present.
struct FieldInfo {
  std::string name;
  std::string display;             ///< human-readable formula
  bool psh_claimed = true;         ///< claimed plurisubharmonic
  bool s1_invariant = false;       ///< invariant under z -> e^{i a} z
  bool smooth_off_origin = true;   ///< C^2 on the punctured domain ball
  double domain_radius = 1.0;      ///< fields live on the ball |z| < this
  std::optional<double> nu;        ///< density of (dd^c u) at the origin
  std::optional<double> tau;       ///< normalized residual mass at the origin
  std::optional<double> kappa;     ///< directional Lipschitz constant, if finite
  bool lipschitz_fails = false;    ///< true when |r u_r| is unbounded near 0
};

/// A real scalar function on C^2 with optional closed-form derivatives.
///
/// Implementations must be pure: eval and closed_form_jet may be called
/// concurrently from many workers.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  /// Value at p.  Must be finite on the punctured domain ball.
  virtual double eval(const CxPoint& p) const = 0;

  /// Closed-form jet at p when the entry has one; std::nullopt otherwise.
  virtual std::optional<Jet2> closed_form_jet(const CxPoint& /*p*/) const {
    return std::nullopt;
  }

  virtual const FieldInfo& info() const = 0;
};

/// Adapter turning closures into a ScalarField; used by tests and by the
/// smoothing engine, which produces fields whose jets come from a kernel
/// convolution rather than a formula.
class LambdaField : public ScalarField {
 public:
  using Eval = std::function<double(const CxPoint&)>;
  using Jet = std::function<std::optional<Jet2>(const CxPoint&)>;

  LambdaField(FieldInfo info, Eval eval, Jet jet = nullptr)
      : info_(std::move(info)), eval_(std::move(eval)), jet_(std::move(jet)) {}

  double eval(const CxPoint& p) const override { return eval_(p); }

  std::optional<Jet2> closed_form_jet(const CxPoint& p) const override {
    if (!jet_) return std::nullopt;
    return jet_(p);
  }

  const FieldInfo& info() const override { return info_; }

 private:
  FieldInfo info_;
  Eval eval_;
  Jet jet_;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

}  // namespace pshlab
