#pragma once

/// \file errors.hpp
/// \brief Exception taxonomy for the library.
///
/// Every failure mode that callers are expected to handle gets its own type,
/// so tests and the CLI can discriminate without string matching.  All of
/// them derive from pshlab::Error, which itself derives from
/// std::runtime_error, so a catch-all remains possible.

#include <stdexcept>
#include <string>

namespace pshlab {

/// Base class of all library exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A finite-difference stencil would touch the origin or leave the domain
/// ball, where fields may be singular or undefined.
class StencilOutsideDomain : public Error {
 public:
  using Error::Error;
};

/// The requested closed-form derivative data does not exist for this field.
class NotAvailable : public Error {
 public:
  using Error::Error;
};

/// An integrand evaluated to a non-finite value at a quadrature node.
class NodeSingular : public Error {
 public:
  using Error::Error;
};

/// A Hopf chart was evaluated on its excluded set (e.g. the branch cut of
/// the principal chart, or zeta = 0 where the basic function is singular).
class ChartSingular : public Error {
 public:
  using Error::Error;
};

/// A catalog lookup used a name outside the registered set.
class UnknownEntry : public Error {
 public:
  using Error::Error;
};

/// Parameters fail an operation's preconditions (wrong range, wrong type).
class BadParams : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be monotone along a ladder of scales was not, so a
/// limiting slope cannot be reported honestly.
class NonMonotone : public Error {
 public:
  using Error::Error;
};

/// The restriction of a field to a complex line hit a singular point other
/// than the origin, so the one-variable identity cannot be evaluated.
class RestrictionSingular : public Error {
 public:
  using Error::Error;
};

/// The entry does not carry the separated structure u = u_s + f(theta) * v
/// that the requested check needs.
class NotSeparatedForm : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the region where the requested smoothing is defined
/// (the convolution ball would leave the domain).
class OutsideDomain : public Error {
 public:
  using Error::Error;
};

/// A verification run finished but at least one check failed.  The CLI maps
/// this to exit code 1.
class CheckFailure : public Error {
 public:
  using Error::Error;
};

/// The run configuration could not be parsed or validated.  The CLI maps
/// this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pshlab
