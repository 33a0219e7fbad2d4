/// Field/jet layer: Wirtinger jets from closed forms and from finite
/// differences, with exact derivative oracles on hand-differentiated fields.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "pshlab/cxpoint.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"
#include "pshlab/field.hpp"
#include "pshlab/jet.hpp"

namespace {

using pshlab::cx;
using pshlab::CxPoint;
using pshlab::Jet2;

/// u = |z|^2 / 2: u_j = zbar^j/2, u_{j kbar} = delta/2, u_{jk} = 0.
pshlab::FieldPtr make_quad() {
  pshlab::FieldInfo info;
  info.name = "quad";
  return std::make_shared<pshlab::LambdaField>(
      info, [](const CxPoint& p) { return 0.5 * p.abs2(); },
      [](const CxPoint& p) -> std::optional<Jet2> {
        Jet2 jet;
        jet.u = 0.5 * p.abs2();
        jet.du = {0.5 * std::conj(p.z0), 0.5 * std::conj(p.z1)};
        jet.hessH.a00 = 0.5;
        jet.hessH.a11 = 0.5;
        jet.hessH.a01 = 0.0;
        return jet;
      });
}

/// u = log|z|: with q = |z|^2, u_j = zbar^j/(2q),
/// u_{j kbar} = delta_{jk}/(2q) - zbar^j z^k/(2q^2),
/// u_{jk} = -zbar^j zbar^k / (2q^2).
pshlab::FieldPtr make_log_norm() {
  pshlab::FieldInfo info;
  info.name = "log_norm";
  return std::make_shared<pshlab::LambdaField>(
      info, [](const CxPoint& p) { return std::log(p.abs()); },
      [](const CxPoint& p) -> std::optional<Jet2> {
        const double q = p.abs2();
        const cx zb0 = std::conj(p.z0);
        const cx zb1 = std::conj(p.z1);
        Jet2 jet;
        jet.u = 0.5 * std::log(q);
        jet.du = {zb0 / (2.0 * q), zb1 / (2.0 * q)};
        jet.hessH.a00 = 1.0 / (2.0 * q) - std::norm(p.z0) / (2.0 * q * q);
        jet.hessH.a11 = 1.0 / (2.0 * q) - std::norm(p.z1) / (2.0 * q * q);
        jet.hessH.a01 = -zb0 * p.z1 / (2.0 * q * q);
        jet.hessHol.a00 = -zb0 * zb0 / (2.0 * q * q);
        jet.hessHol.a01 = -zb0 * zb1 / (2.0 * q * q);
        jet.hessHol.a11 = -zb1 * zb1 / (2.0 * q * q);
        return jet;
      });
}

/// u = Re z^1: du = (0, 1/2), all second derivatives vanish.
pshlab::FieldPtr make_re_z1() {
  pshlab::FieldInfo info;
  info.name = "re_z1";
  return std::make_shared<pshlab::LambdaField>(
      info, [](const CxPoint& p) { return p.z1.real(); },
      [](const CxPoint& p) -> std::optional<Jet2> {
        Jet2 jet;
        jet.u = p.z1.real();
        jet.du = {cx(0.0, 0.0), cx(0.5, 0.0)};
        return jet;
      });
}

/// u = Re((z^0)^2 z^1), the real part of a holomorphic cubic: du =
/// (z^0 z^1, (z^0)^2/2), the mixed Hessian vanishes, and the holomorphic
/// Hessian is (z^1, z^0; ., 0).
pshlab::FieldPtr make_pluri_cubic() {
  pshlab::FieldInfo info;
  info.name = "pluri_cubic";
  info.psh_claimed = false;
  return std::make_shared<pshlab::LambdaField>(
      info,
      [](const CxPoint& p) { return (p.z0 * p.z0 * p.z1).real(); },
      [](const CxPoint& p) -> std::optional<Jet2> {
        Jet2 jet;
        jet.u = (p.z0 * p.z0 * p.z1).real();
        jet.du = {p.z0 * p.z1, 0.5 * p.z0 * p.z0};
        jet.hessHol.a00 = p.z1;
        jet.hessHol.a01 = p.z0;
        jet.hessHol.a11 = 0.0;
        return jet;
      });
}

double jet_distance(const Jet2& a, const Jet2& b) {
  double d = std::abs(a.u - b.u);
  for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a.du[j] - b.du[j]));
  d = std::max(d, std::abs(a.hessH.a00 - b.hessH.a00));
  d = std::max(d, std::abs(a.hessH.a11 - b.hessH.a11));
  d = std::max(d, std::abs(a.hessH.a01 - b.hessH.a01));
  d = std::max(d, std::abs(a.hessHol.a00 - b.hessHol.a00));
  d = std::max(d, std::abs(a.hessHol.a01 - b.hessHol.a01));
  d = std::max(d, std::abs(a.hessHol.a11 - b.hessHol.a11));
  return d;
}

const CxPoint kSample{cx(0.5, 0.1), cx(-0.3, 0.4)};

}  // namespace

TEST_CASE("hermitian 2x2 closed-form eigenvalues and determinant",
          "[fields]") {
  pshlab::Herm2 m;
  m.a00 = 2.0;
  m.a11 = 1.0;
  m.a01 = cx(0.0, 1.0);
  const double root5 = std::sqrt(5.0);
  REQUIRE(m.trace() == Catch::Approx(3.0));
  REQUIRE(m.det() == Catch::Approx(1.0));
  REQUIRE(m.eig_min() == Catch::Approx(0.5 * (3.0 - root5)));
  REQUIRE(m.eig_max() == Catch::Approx(0.5 * (3.0 + root5)));
  REQUIRE(m.at(1, 0) == std::conj(m.at(0, 1)));
}

TEST_CASE("finite-difference jets match hand-differentiated closed forms",
          "[fields]") {
  const pshlab::FdSpec fd{};

  SECTION("quadratic field (differences are exact up to rounding)") {
    // Second differences cancel ~16 digits against h^2 = 1e-8, so the
    // attainable floor is about eps/h^2 ~ 5e-9.
    const auto field = make_quad();
    const Jet2 exact = *field->closed_form_jet(kSample);
    const Jet2 approx = pshlab::fd_jet(*field, kSample, fd);
    REQUIRE(jet_distance(exact, approx) < 1e-8);
  }

  SECTION("log-norm field") {
    const auto field = make_log_norm();
    const Jet2 exact = *field->closed_form_jet(kSample);
    const Jet2 approx = pshlab::fd_jet(*field, kSample, fd);
    REQUIRE(jet_distance(exact, approx) < 1e-6);
  }

  SECTION("linear field Re z^1") {
    const auto field = make_re_z1();
    const Jet2 exact = *field->closed_form_jet(kSample);
    const Jet2 approx = pshlab::fd_jet(*field, kSample, fd);
    REQUIRE(jet_distance(exact, approx) < 1e-9);
    REQUIRE(exact.du[0] == cx(0.0, 0.0));
    REQUIRE(exact.du[1] == cx(0.5, 0.0));
  }

  SECTION("real part of a holomorphic cubic: pluriharmonic, so the mixed "
          "Hessian vanishes while the holomorphic Hessian does not") {
    const auto field = make_pluri_cubic();
    const Jet2 exact = *field->closed_form_jet(kSample);
    const Jet2 approx = pshlab::fd_jet(*field, kSample, fd);
    REQUIRE(jet_distance(exact, approx) < 1e-6);
    REQUIRE(std::abs(approx.hessH.a00) < 1e-7);
    REQUIRE(std::abs(approx.hessH.a11) < 1e-7);
    REQUIRE(std::abs(approx.hessH.a01) < 1e-7);
    REQUIRE(std::abs(approx.hessHol.a01 - kSample.z0) < 1e-6);
  }

  SECTION("Richardson extrapolation tightens the log-norm error") {
    const auto field = make_log_norm();
    const Jet2 exact = *field->closed_form_jet(kSample);
    pshlab::FdSpec plain{1e-3, false};
    pshlab::FdSpec rich{1e-3, true};
    const double e_plain =
        jet_distance(exact, pshlab::fd_jet(*field, kSample, plain));
    const double e_rich =
        jet_distance(exact, pshlab::fd_jet(*field, kSample, rich));
    REQUIRE(e_rich < e_plain);
    REQUIRE(e_rich < 1e-8);
  }
}

TEST_CASE("log-norm jet pins at (1, 0)", "[fields]") {
  const auto field = make_log_norm();
  const Jet2 jet = *field->closed_form_jet(CxPoint{cx(1.0, 0.0), cx(0.0, 0.0)});
  REQUIRE(jet.u == 0.0);
  REQUIRE(jet.du[0] == cx(0.5, 0.0));
  REQUIRE(jet.du[1] == cx(0.0, 0.0));
  REQUIRE(jet.hessH.a00 == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(jet.hessH.a11 == Catch::Approx(0.5));
  REQUIRE(std::abs(jet.hessH.a01) < 1e-15);
}

TEST_CASE("derived jet functionals", "[fields]") {
  const auto field = make_quad();
  const Jet2 jet = *field->closed_form_jet(kSample);
  // r u_r of |z|^2/2 is |z|^2; the gradient norm is |z|; the Euclidean
  // Laplacian of |z|^2/2 in R^4 is 4.
  REQUIRE(pshlab::radial_log_derivative(jet, kSample) ==
          Catch::Approx(kSample.abs2()));
  REQUIRE(pshlab::gradient_norm(jet) == Catch::Approx(kSample.abs()));
  REQUIRE(pshlab::laplacian(jet) == Catch::Approx(4.0));
}

TEST_CASE("stencil guards and parameter validation", "[fields]") {
  const auto field = make_quad();
  const pshlab::FdSpec fd{1e-4, false};

  SECTION("too close to the origin") {
    const CxPoint p{cx(1e-5, 0.0), cx(0.0, 0.0)};
    REQUIRE_THROWS_AS(pshlab::fd_jet(*field, p, fd),
                      pshlab::StencilOutsideDomain);
  }
  SECTION("too close to the domain boundary") {
    const CxPoint p{cx(0.99995, 0.0), cx(0.0, 0.0)};
    REQUIRE_THROWS_AS(pshlab::fd_jet(*field, p, fd),
                      pshlab::StencilOutsideDomain);
  }
  SECTION("nonpositive step is rejected") {
    REQUIRE_THROWS_AS(pshlab::fd_jet(*field, kSample, pshlab::FdSpec{0.0, false}),
                      pshlab::BadParams);
    REQUIRE_THROWS_AS(pshlab::fd_jet(*field, kSample, pshlab::FdSpec{-1.0, false}),
                      pshlab::BadParams);
  }
}

TEST_CASE("jet dispatch prefers closed forms and reports their absence",
          "[fields]") {
  SECTION("closed form wins over differencing when present") {
    // A field whose closed-form jet deliberately disagrees with its values;
    // jet_of must return the closed form untouched.
    pshlab::FieldInfo info;
    info.name = "marker";
    const auto field = std::make_shared<pshlab::LambdaField>(
        info, [](const CxPoint& p) { return 0.5 * p.abs2(); },
        [](const CxPoint&) -> std::optional<Jet2> {
          Jet2 jet;
          jet.du = {cx(7.0, 0.0), cx(0.0, 0.0)};
          return jet;
        });
    const Jet2 jet = pshlab::jet_of(*field, kSample, {});
    REQUIRE(jet.du[0] == cx(7.0, 0.0));
  }

  SECTION("analytic_jet names the field when no closed form exists") {
    pshlab::FieldInfo info;
    info.name = "value_only";
    const auto field = std::make_shared<pshlab::LambdaField>(
        info, [](const CxPoint& p) { return p.abs2(); });
    REQUIRE(!field->closed_form_jet(kSample).has_value());
    REQUIRE_THROWS_WITH(pshlab::analytic_jet(*field, kSample),
                        Catch::Matchers::ContainsSubstring("value_only"));
    // jet_of falls back to differencing and still returns a usable jet.
    const Jet2 jet = pshlab::jet_of(*field, kSample, {});
    REQUIRE(std::abs(jet.du[0] - std::conj(kSample.z0)) < 1e-7);
  }
}
