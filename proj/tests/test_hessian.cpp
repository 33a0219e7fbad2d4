/// Transverse (Sasakian) Hessian: closed-form pins for the reference
/// fields, agreement of the frame-calculus route with the Cartesian
/// congruence route, the radial-coordinate identity for the fiber entry,
/// and positivity surveys.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <memory>

#include "pshlab/catalog.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/hessian.hpp"
#include "pshlab/hopf.hpp"

namespace {

using pshlab::cx;
using pshlab::Chart;
using pshlab::CxPoint;
using pshlab::HopfPoint;
using pshlab::SasakiHessian;

double fs_density(const cx& zeta) {
  const double w2 = 1.0 + std::norm(zeta);
  return 1.0 / (w2 * w2);
}

double route_gap(const SasakiHessian& a, const SasakiHessian& b) {
  double gap = std::abs(a.s00 - b.s00);
  gap = std::max(gap, std::abs(a.s11 - b.s11));
  gap = std::max(gap, std::abs(a.s01 - b.s01));
  gap = std::max(gap, std::abs(a.s10 - b.s10));
  gap = std::max(gap, std::abs(a.rX0u - b.rX0u));
  gap = std::max(gap, std::abs(a.rX0bar_u - b.rX0bar_u));
  return gap;
}

}  // namespace

TEST_CASE("closed-form transverse Hessians of the reference fields",
          "[hessian]") {
  const auto quad = pshlab::make_entry("quad").field;
  const auto log_norm = pshlab::make_entry("log_norm").field;

  for (const HopfPoint& p : pshlab::random_hopf_samples(20, 501u)) {
    const SasakiHessian sq =
        pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*quad, p));
    REQUIRE(sq.s00 == Catch::Approx(0.5).epsilon(1e-12));
    REQUIRE(sq.s11 ==
            Catch::Approx(0.5 * p.r * p.r * fs_density(p.zeta)).epsilon(1e-12));
    REQUIRE(std::abs(sq.s01) < 1e-13);
    REQUIRE(std::abs(sq.s10 - std::conj(sq.s01)) < 1e-15);

    const SasakiHessian sl =
        pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*log_norm, p));
    REQUIRE(std::abs(sl.s00) < 1e-13);
    REQUIRE(sl.s11 == Catch::Approx(0.5 * fs_density(p.zeta)).epsilon(1e-12));
    REQUIRE(std::abs(sl.s01) < 1e-13);
  }
}

TEST_CASE("frame route and congruence route agree on smooth fields",
          "[hessian]") {
  const auto samples = pshlab::random_hopf_samples(100, 601u);

  SECTION("tight agreement on the two closed-form reference fields") {
    for (const char* name : {"quad", "log_norm"}) {
      const auto field = pshlab::make_entry(name).field;
      double worst = 0.0;
      for (const HopfPoint& p : samples) {
        const SasakiHessian a =
            pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*field, p));
        const SasakiHessian b = pshlab::sasaki_hessian_cartesian(*field, p);
        worst = std::max(worst, route_gap(a, b));
      }
      INFO("field " << name << " worst gap " << worst);
      REQUIRE(worst < 1e-8);
    }
  }

  SECTION("agreement across every smooth catalog entry") {
    for (const pshlab::CatalogEntry& entry : pshlab::smooth_psh_entries()) {
      double worst = 0.0;
      for (const HopfPoint& p : samples) {
        const SasakiHessian a =
            pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*entry.field, p));
        const SasakiHessian b =
            pshlab::sasaki_hessian_cartesian(*entry.field, p);
        worst = std::max(worst, route_gap(a, b));
      }
      INFO("entry " << entry.name << " worst gap " << worst);
      REQUIRE(worst < 1e-6);
    }
  }
}

TEST_CASE("fiber entry matches the radial-coordinate second-order form",
          "[hessian]") {
  // 4 s_00 = u_rr + u_r / r + 4 u_{theta theta} / r^2, with the right side
  // assembled from plain central differences of the evaluation.
  const auto field = pshlab::make_entry("sym_plus_re").field;
  const double h = 1e-4;
  for (const HopfPoint& p : pshlab::random_hopf_samples(10, 701u)) {
    const SasakiHessian s =
        pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*field, p));

    const auto eval_at = [&](double r, double theta) {
      HopfPoint q = p;
      q.r = r;
      q.theta = theta;
      return field->eval(pshlab::embed(q));
    };
    const double u0 = eval_at(p.r, p.theta);
    const double u_r =
        (eval_at(p.r + h, p.theta) - eval_at(p.r - h, p.theta)) / (2.0 * h);
    const double u_rr = (eval_at(p.r + h, p.theta) + eval_at(p.r - h, p.theta) -
                         2.0 * u0) /
                        (h * h);
    const double u_thth =
        (eval_at(p.r, p.theta + h) + eval_at(p.r, p.theta - h) - 2.0 * u0) /
        (h * h);

    const double rhs =
        u_rr + u_r / p.r + 4.0 * u_thth / (p.r * p.r);
    REQUIRE(4.0 * s.s00 == Catch::Approx(rhs).margin(1e-5));
  }
}

TEST_CASE("positivity surveys through both routes", "[hessian]") {
  const auto samples = pshlab::random_hopf_samples(60, 801u);

  SECTION("radial quadratic is strictly positive") {
    const auto quad = pshlab::make_entry("quad").field;
    const pshlab::PshReport report = pshlab::psh_check(*quad, samples);
    REQUIRE(report.agree);
    REQUIRE(report.min_eigen_S > 0.0);
    REQUIRE(report.min_eigen_cartesian == Catch::Approx(0.5).epsilon(1e-12));
  }

  SECTION("negated quadratic fails on both routes at every sample") {
    pshlab::FieldInfo info;
    info.name = "neg_quad";
    info.psh_claimed = false;
    const auto neg = std::make_shared<pshlab::LambdaField>(
        info, [](const CxPoint& p) { return -0.5 * p.abs2(); },
        [](const CxPoint& p) -> std::optional<pshlab::Jet2> {
          pshlab::Jet2 jet;
          jet.u = -0.5 * p.abs2();
          jet.du = {-0.5 * std::conj(p.z0), -0.5 * std::conj(p.z1)};
          jet.hessH.a00 = -0.5;
          jet.hessH.a11 = -0.5;
          return jet;
        });
    const pshlab::PshReport report = pshlab::psh_check(*neg, samples);
    REQUIRE(report.agree);
    REQUIRE(report.min_eigen_S < -1e-3);
    REQUIRE(report.min_eigen_cartesian ==
            Catch::Approx(-0.5).epsilon(1e-12));
  }

  SECTION("homogeneous symmetric model stays nonnegative") {
    const auto entry = pshlab::make_entry("one_n_symm", {{"n", 2.0}});
    const pshlab::PshReport report = pshlab::psh_check(*entry.field, samples);
    REQUIRE(report.agree);
    REQUIRE(report.min_eigen_S > -1e-10);
    REQUIRE(report.min_eigen_cartesian > -1e-10);
  }
}

TEST_CASE("transverse Hessian guards", "[hessian]") {
  const auto quad = pshlab::make_entry("quad").field;

  HopfPoint simple{0.5, 0.3, cx(0.4, 0.2), Chart::Simple};
  REQUIRE_THROWS_AS(
      pshlab::sasaki_hessian_hopf(pshlab::frame_apply(*quad, simple)),
      pshlab::BadParams);

  pshlab::Jet2 jet;
  REQUIRE_THROWS_AS(
      pshlab::sasaki_hessian_cartesian(jet, CxPoint{cx(0.0, 0.0),
                                                    cx(0.5, 0.0)}),
      pshlab::ChartSingular);

  REQUIRE_THROWS_AS(pshlab::psh_check(*quad, {}), pshlab::BadParams);
}
