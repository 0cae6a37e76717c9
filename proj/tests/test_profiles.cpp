#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meridian/profiles.hpp"

using namespace meridian;

TEST_CASE("invert_V on built-ins") {
  const Boundary ann(2.0, 1.0);
  const WeightProfile Va = WeightProfile::annulus();
  CHECK(invert_V(Va, 1.5, ann) == doctest::Approx(1.5).epsilon(1e-12));

  const Boundary heli(2.0, 0.0);
  const WeightProfile Vh = WeightProfile::helicoid();
  CHECK(invert_V(Vh, 1.0, heli) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  // closed-form inverse of sqrt(1 + x^2)
  CHECK(invert_V(Vh, 2.0, heli) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  // independent bisection oracle for the same value
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::sqrt(1.0 + mid * mid) < 2.0 ? lo : hi) = mid;
  }
  CHECK(invert_V(Vh, 2.0, heli) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));

  CHECK_THROWS_AS(invert_V(Va, 0.5, ann), DomainError);
  CHECK_THROWS_AS(invert_V(Va, 2.5, ann), DomainError);
}

TEST_CASE("invert_V is a right inverse on dense samples") {
  const Boundary ann(2.0, 1.0);
  const WeightProfile Va = WeightProfile::annulus();
  const Boundary heli(2.0, 0.0);
  const WeightProfile Vh = WeightProfile::helicoid();
  for (int i = 0; i <= 200; ++i) {
    const double xa = 1.0 + i / 200.0;
    CHECK(std::abs(Va(invert_V(Va, Va(xa), ann)) - Va(xa)) <= kTolInvBuiltin);
    const double xh = 2.0 * i / 200.0;
    CHECK(std::abs(Vh(invert_V(Vh, Vh(xh), heli)) - Vh(xh)) <= kTolInvBuiltin);
  }
}

TEST_CASE("make_profile built-ins") {
  const ProfileTriple ann = make_profile({"annulus", 2.0, 1.0, {}, {}});
  CHECK(ann.V(1.7) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(ann.V.deriv(1.3) == doctest::Approx(1.0));
  CHECK(ann.metric.gyy(1.2345) == doctest::Approx(1.0));

  const ProfileTriple heli = make_profile({"helicoid", 2.0, 0.0, {}, {}});
  CHECK(heli.V(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(heli.V(0.0) == doctest::Approx(1.0));
  CHECK(heli.metric.gyy(1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("make_profile validation errors") {
  ProfileSpec bad_table{"custom", 2.0, 1.0, {{1.0, 1.1}, {2.0, 1.05}}, {}};
  CHECK_THROWS_AS(make_profile(bad_table), ValidationError);

  CHECK_THROWS_AS(make_profile({"annulus", 1.0, 2.0, {}, {}}), ValidationError);
  // V(0) = 0 forbids r2 = 0
  CHECK_THROWS_AS(make_profile({"annulus", 2.0, 0.0, {}, {}}), ValidationError);
  CHECK_THROWS_AS(make_profile({"nonsense", 2.0, 1.0, {}, {}}), ValidationError);
}

TEST_CASE("custom tables interpolate monotonically") {
  ProfileSpec spec;
  spec.kind = "custom";
  spec.r1 = 2.0;
  spec.r2 = 0.5;
  for (int i = 0; i <= 12; ++i) {
    const double x = 0.4 + i * 0.15;
    spec.V_table.emplace_back(x, x * x + 0.3);  // strictly increasing on [0.4, 2.2]
    spec.gyy_table.emplace_back(x, 1.0 + 0.5 * std::sin(x));
  }
  const ProfileTriple tri = make_profile(spec);

  double prev = tri.V(0.5);
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.5 + 1.5 * i / 400.0;
    const double vx = tri.V(x);
    CHECK(vx > prev);
    CHECK(tri.V.deriv(x) > 0.0);
    CHECK(tri.metric.gyy(x) > 0.0);
    prev = vx;
  }
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.5 + 1.5 * i / 40.0;
    CHECK(std::abs(tri.V(invert_V(tri.V, tri.V(x), tri.bd)) - tri.V(x)) <=
          kTolInvCustom);
  }
  // custom nodes are reproduced exactly
  CHECK(tri.V(1.0) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("screw metric asymptotics") {
  const MetricProfile screw = MetricProfile::screw();
  CHECK(screw.gyy(1e3) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(screw.gyy(1e-3) / (1e-3 * 1e-3) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("boundary validation") {
  CHECK_THROWS_AS(Boundary(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Boundary(1.0, -0.5), ValidationError);
  CHECK(Boundary(2.0, 0.0).width() == doctest::Approx(2.0));
}
