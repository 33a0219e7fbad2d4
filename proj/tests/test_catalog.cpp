/// Example-function catalog: evaluation pins, closed-form jets against
/// high-order finite differences, positivity over a deterministic grid,
/// circle invariance flags, recorded expectations, and parameter guards.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pshlab/catalog.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/fd.hpp"

namespace {

using pshlab::cx;
using pshlab::CxPoint;
using pshlab::Jet2;

/// Deterministic annulus points.  The "tame" variant additionally keeps
/// clear of every locus where some catalog field concentrates curvature
/// (the z^0 = 0 divisor, the real z^0 axis with its oscillator wells, the
/// z^1 = (z^0)^n curves), so central differences of any closed-form entry
/// converge at their nominal rate.
std::vector<CxPoint> annulus_points(int n, unsigned seed, bool tame) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> ur(tame ? 0.4 : 0.3,
                                            tame ? 0.75 : 0.8);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pshlab::kPi);
  std::uniform_real_distribution<double> mix(0.0, 1.0);
  std::vector<CxPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    const double r = ur(gen);
    const double c = mix(gen);
    const cx z0 = std::polar(r * std::sqrt(c), ang(gen));
    const cx z1 = std::polar(r * std::sqrt(1.0 - c), ang(gen));
    const CxPoint p{z0, z1};
    if (std::abs(z0) < 0.05) continue;
    if (tame) {
      if (std::abs(z0) < 0.25 || std::abs(z0.imag()) < 0.15) continue;
      if (std::abs(z1) < 0.1) continue;
      if (std::abs(z1 - z0 * z0) < 0.15) continue;
      if (std::abs(z1 - z0 * z0 * z0) < 0.15) continue;
    }
    out.push_back(p);
  }
  return out;
}

double jet_gap(const Jet2& a, const Jet2& b) {
  double gap = std::abs(a.u - b.u);
  for (int j = 0; j < 2; ++j) gap = std::max(gap, std::abs(a.d(j) - b.d(j)));
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      gap = std::max(gap, std::abs(a.hessH.at(j, k) - b.hessH.at(j, k)));
      gap = std::max(gap, std::abs(a.hessHol.at(j, k) - b.hessHol.at(j, k)));
    }
  }
  return gap;
}

}  // namespace

TEST_CASE("catalog roster", "[catalog]") {
  const auto names = pshlab::catalog_names();
  REQUIRE(names.size() == 8);
  for (const std::string& name : names) {
    const pshlab::CatalogEntry entry = pshlab::make_entry(name);
    REQUIRE(entry.name == name);
    REQUIRE(entry.field != nullptr);
    REQUIRE(entry.field->info().name == name);
  }

  const auto smooth = pshlab::smooth_psh_entries();
  REQUIRE(smooth.size() == 6);
  for (const auto& entry : smooth) {
    REQUIRE(entry.field->info().smooth_off_origin);
    REQUIRE(entry.field->info().psh_claimed);
    REQUIRE(entry.name != "half_log");
    REQUIRE(entry.name != "max_green");
  }
}

TEST_CASE("evaluation pins", "[catalog]") {
  const double e1 = std::exp(-1.0);

  SECTION("radial quadratic and cone potential") {
    const auto quad = pshlab::make_entry("quad").field;
    REQUIRE(quad->eval({cx(0.3, 0.0), cx(0.0, 0.4)}) ==
            Catch::Approx(0.125));
    const auto log_norm = pshlab::make_entry("log_norm").field;
    REQUIRE(log_norm->eval({cx(e1, 0.0), cx(0.0, 0.0)}) ==
            Catch::Approx(-1.0));
  }

  SECTION("square root of the divisor potential") {
    const auto half_log = pshlab::make_entry("half_log").field;
    REQUIRE(half_log->eval({cx(std::exp(-2.0), 0.0), cx(0.1, 0.0)}) ==
            Catch::Approx(-2.0));
  }

  SECTION("homogeneous symmetric model on its diagonal curve") {
    for (int n : {2, 3}) {
      const auto entry = pshlab::make_entry(
          "one_n_symm", {{"n", static_cast<double>(n)}});
      const double t = 0.3;
      const CxPoint on_curve{cx(t, 0.0), cx(std::pow(t, n), 0.0)};
      REQUIRE(entry.field->eval(on_curve) ==
              Catch::Approx(n * std::log(t)).epsilon(1e-12));
      REQUIRE(entry.field->info().nu.value() ==
              Catch::Approx(1.0 / n));
    }
  }

  SECTION("one-variable oscillating sum ignores the second coordinate") {
    const auto osc = pshlab::make_entry("osc_1d").field;
    REQUIRE(std::isfinite(osc->eval({cx(0.0, 0.0), cx(0.0, 0.0)})));
    REQUIRE(osc->eval({cx(0.4, 0.1), cx(0.9, 0.0)}) ==
            osc->eval({cx(0.4, 0.1), cx(-0.3, 0.2)}));
  }

  SECTION("max of the oscillating sum and the divisor potential") {
    const auto osc = pshlab::make_entry("osc_1d").field;
    const auto green = pshlab::make_entry("max_green").field;
    for (const CxPoint& p : annulus_points(25, 9001u, false)) {
      const double want =
          std::max(osc->eval(p), std::log(std::abs(p.z1)));
      REQUIRE(green->eval(p) == Catch::Approx(want).margin(1e-15));
    }
  }

  SECTION("cone potential plus pluriharmonic part") {
    const auto f = pshlab::make_entry("sym_plus_re").field;
    REQUIRE(f->eval({cx(e1, 0.0), cx(0.0, 0.0)}) == Catch::Approx(-1.0));
    REQUIRE(f->eval({cx(0.0, 0.0), cx(0.5, 0.0)}) ==
            Catch::Approx(std::log(0.5) + 0.5));
  }

  SECTION("separated normal forms") {
    const auto scaled = pshlab::make_entry("separated", {{"us_scale", 2.0}});
    REQUIRE(scaled.field->eval({cx(0.5, 0.0), cx(0.25, 0.0)}) ==
            Catch::Approx(2.0 * std::log(std::hypot(0.5, 0.25)) + 0.25));

    const auto vlog = pshlab::make_entry(
        "separated", {{"us_scale", 2.0}, {"v_log", 1.0}});
    // z^1 real positive: angular factor cos(theta') = 1.
    REQUIRE(vlog.field->eval({cx(0.3, 0.0), cx(0.4, 0.0)}) ==
            Catch::Approx(3.0 * std::log(0.5)));
    // On the z^1 = 0 divisor the angular factor is set to 0.
    REQUIRE(vlog.field->eval({cx(0.5, 0.0), cx(0.0, 0.0)}) ==
            Catch::Approx(2.0 * std::log(0.5)));
    REQUIRE(vlog.field->info().smooth_off_origin == false);
    REQUIRE(vlog.expected.nu.value() == Catch::Approx(1.0));
  }
}

TEST_CASE("closed-form jets agree with high-order finite differences",
          "[catalog]") {
  const auto points = annulus_points(100, 1303u, true);
  pshlab::FdSpec fd;
  fd.h = 1e-3;
  fd.richardson = true;

  const std::vector<pshlab::CatalogEntry> entries = {
      pshlab::make_entry("quad"),
      pshlab::make_entry("log_norm"),
      pshlab::make_entry("half_log"),
      pshlab::make_entry("one_n_symm", {{"n", 2.0}}),
      pshlab::make_entry("one_n_symm", {{"n", 3.0}}),
      pshlab::make_entry("osc_1d"),
      pshlab::make_entry("sym_plus_re"),
      pshlab::make_entry("separated", {{"us_scale", 2.0}}),
  };
  for (const auto& entry : entries) {
    double worst = 0.0;
    for (const CxPoint& p : points) {
      const auto closed = entry.field->closed_form_jet(p);
      REQUIRE(closed.has_value());
      const Jet2 numeric = pshlab::fd_jet(*entry.field, p, fd);
      worst = std::max(worst, jet_gap(*closed, numeric));
    }
    INFO("entry " << entry.name << " worst jet gap " << worst);
    REQUIRE(worst < 1e-5);
  }
}

TEST_CASE("claimed positivity holds on a dense deterministic grid",
          "[catalog]") {
  const auto points = annulus_points(500, 42u, false);
  const std::vector<pshlab::CatalogEntry> entries = {
      pshlab::make_entry("quad"),
      pshlab::make_entry("log_norm"),
      pshlab::make_entry("half_log"),
      pshlab::make_entry("one_n_symm", {{"n", 2.0}}),
      pshlab::make_entry("one_n_symm", {{"n", 3.0}}),
      pshlab::make_entry("osc_1d"),
      pshlab::make_entry("sym_plus_re"),
      pshlab::make_entry("separated", {{"us_scale", 2.0}}),
  };
  for (const auto& entry : entries) {
    double min_eig = 0.0;
    for (const CxPoint& p : points) {
      const auto jet = entry.field->closed_form_jet(p);
      REQUIRE(jet.has_value());
      min_eig = std::min(min_eig, jet->hessH.eig_min());
    }
    INFO("entry " << entry.name << " min eigenvalue " << min_eig);
    REQUIRE(min_eig >= -1e-8);
  }
}

TEST_CASE("circle invariance matches the recorded flag", "[catalog]") {
  for (const char* name : {"quad", "log_norm", "half_log"}) {
    const auto field = pshlab::make_entry(name).field;
    REQUIRE(field->info().s1_invariant);
    for (const CxPoint& p : annulus_points(20, 7777u, false)) {
      for (double alpha : {0.7, 2.1, 4.4}) {
        const cx rot = std::polar(1.0, alpha);
        const CxPoint q{rot * p.z0, rot * p.z1};
        REQUIRE(field->eval(q) ==
                Catch::Approx(field->eval(p)).margin(1e-12));
      }
    }
  }
  REQUIRE_FALSE(pshlab::make_entry("sym_plus_re").field->info().s1_invariant);
  REQUIRE_FALSE(pshlab::make_entry("one_n_symm").field->info().s1_invariant);
}

TEST_CASE("recorded expectations", "[catalog]") {
  const auto quad = pshlab::make_entry("quad");
  REQUIRE(quad.expected.nu.value() == 0.0);
  REQUIRE(quad.expected.tau.value() == 0.0);
  REQUIRE(quad.expected.m_slope(1.0) == Catch::Approx(std::exp(-2.0)));

  const auto log_norm = pshlab::make_entry("log_norm");
  REQUIRE(log_norm.expected.nu.value() == 1.0);
  REQUIRE(log_norm.expected.tau.value() == 1.0);
  REQUIRE(log_norm.field->info().kappa.value() == 1.0);
  REQUIRE(log_norm.expected.m_slope(9.0) == Catch::Approx(1.0));

  const auto half_log = pshlab::make_entry("half_log");
  REQUIRE(half_log.expected.m_slope(4.0) == Catch::Approx(0.5));
  REQUIRE(half_log.expected.m_slope(16.0) == Catch::Approx(0.25));

  const auto symm = pshlab::make_entry("one_n_symm", {{"n", 3.0}});
  REQUIRE(symm.expected.nu.value() == Catch::Approx(1.0 / 3.0));
  REQUIRE(symm.expected.tau.value() == 1.0);
  REQUIRE(symm.expected.lipschitz_fails);
  REQUIRE(symm.field->info().lipschitz_fails);

  const auto spr = pshlab::make_entry("sym_plus_re");
  REQUIRE(spr.expected.separated.has_value());
  const auto& sep = *spr.expected.separated;
  REQUIRE(sep.sup_f == 1.0);
  REQUIRE(sep.neg_inf_f == 1.0);
  REQUIRE(sep.us_scale == 1.0);
  REQUIRE(sep.f(0.0) == Catch::Approx(1.0));
  REQUIRE(sep.f(pshlab::kPi) == Catch::Approx(-1.0));
  pshlab::HopfPoint q{0.5, 0.0, cx(0.0, 0.0), pshlab::Chart::Simple};
  REQUIRE(sep.v(q) == Catch::Approx(0.5));
  REQUIRE(sep.r_dr_v(q) == Catch::Approx(0.5));

  const auto vlog = pshlab::make_entry(
      "separated", {{"us_scale", 2.0}, {"v_log", 1.0}});
  REQUIRE(vlog.expected.separated.has_value());
  pshlab::HopfPoint q2{std::exp(-2.0), 0.0, cx(0.0, 0.0),
                       pshlab::Chart::Simple};
  REQUIRE(vlog.expected.separated->v(q2) == Catch::Approx(-2.0));
  REQUIRE(vlog.expected.separated->r_dr_v(q2) == Catch::Approx(1.0));
  REQUIRE(vlog.expected.m_slope(5.0) == Catch::Approx(2.0));
}

TEST_CASE("catalog parameter guards", "[catalog]") {
  REQUIRE_THROWS_AS(pshlab::make_entry("no_such_entry"),
                    pshlab::UnknownEntry);
  REQUIRE_THROWS_WITH(pshlab::make_entry("no_such_entry"),
                      Catch::Matchers::ContainsSubstring("no_such_entry"));
  REQUIRE_THROWS_AS(pshlab::make_entry("one_n_symm", {{"n", 1.0}}),
                    pshlab::BadParams);
  REQUIRE_THROWS_AS(pshlab::make_entry("one_n_symm", {{"n", 2.5}}),
                    pshlab::BadParams);
  REQUIRE_THROWS_AS(pshlab::make_entry("osc_1d", {{"K", 0.0}}),
                    pshlab::BadParams);
  REQUIRE_THROWS_AS(pshlab::make_entry("max_green", {{"K", -1.0}}),
                    pshlab::BadParams);
  REQUIRE_THROWS_AS(pshlab::make_entry("sym_plus_re", {{"us_scale", 2.0}}),
                    pshlab::BadParams);
}
