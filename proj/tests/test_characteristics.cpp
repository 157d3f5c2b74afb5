#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sldg/characteristics.hpp"

using namespace sldg;
using std::numbers::pi;

namespace {
// x' = sin x: tan(x/2) grows like e^t.
double sine_foot(double x, double duration) { return 2.0 * std::atan(std::tan(0.5 * x) * std::exp(-duration)); }
}  // namespace

TEST_CASE("constant velocity feet are exact") {
  auto v = velocity::constant(1.5);
  CHECK(trace_back(0.3, 1.0, 0.2, v, 4) == doctest::Approx(0.3 - 1.2).epsilon(1e-15));
  Mesh1D m(0.0, 1.0, 10);
  auto feet = trace_interval_feet(m, 4, 0.5, 0.0, v, 2, 4);
  REQUIRE(feet.size() == 3);
  CHECK(feet[0].end == doctest::Approx(0.4));
  CHECK(feet[1].end == doctest::Approx(0.45));
  CHECK(feet[2].foot == doctest::Approx(0.5 - 0.75));
  CHECK(trace_interval_feet(m, 4, 0.5, 0.0, v, 0, 4).size() == 1);
}

TEST_CASE("sine field against the closed-form characteristic") {
  auto v = velocity::sine();
  for (double x : {0.2, 1.0, 2.5, 3.0})
    CHECK(trace_back(x, 0.7, 0.1, v, 256) == doctest::Approx(sine_foot(x, 0.6)).epsilon(1e-10));
}

TEST_CASE("RK4 substepping is fourth order") {
  auto v = velocity::sine();
  const double exact = sine_foot(2.0, 2.0);
  double prev = 0.0;
  for (int s : {2, 4, 8, 16}) {
    double err = std::abs(trace_back(2.0, 2.0, 0.0, v, s) - exact);
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("rigid rotation and forward tracing") {
  auto v = velocity::rigid_rotation();
  Point2 p{1.0, 0.5};
  const double th = -0.8;  // backward in time rotates clockwise
  Point2 f = trace_back(p, 0.8, 0.0, v, 256);
  CHECK(f.x == doctest::Approx(std::cos(th) * p.x - std::sin(th) * p.y).epsilon(1e-10));
  CHECK(f.y == doctest::Approx(std::sin(th) * p.x + std::cos(th) * p.y).epsilon(1e-10));

  // t_start after t_end traces forward; the round trip returns home.
  Point2 g = trace_back(p, 0.3, 0.9, v, 32);
  Point2 back = trace_back(g, 0.9, 0.3, v, 32);
  CHECK(back.x == doctest::Approx(p.x).epsilon(1e-9));
  CHECK(back.y == doctest::Approx(p.y).epsilon(1e-9));
  auto s = velocity::sine();
  CHECK(trace_back(trace_back(1.3, 0.0, 0.4, s, 16), 0.4, 0.0, s, 16) == doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("swirling flow reverses over one period") {
  auto v = velocity::swirling(1.5);
  CHECK_FALSE(v.autonomous);
  Point2 p{0.7, -0.4};
  // f integrates to zero over [0, T]: the trajectory returns to its start.
  Point2 f = trace_back(p, 1.5, 0.0, v, 400);
  CHECK(f.x == doctest::Approx(p.x).epsilon(1e-8));
  CHECK(f.y == doctest::Approx(p.y).epsilon(1e-8));
  // The velocity vanishes on the domain boundary.
  Point2 e = trace_back(Point2{-pi, 0.3}, 0.5, 0.0, v, 16);
  CHECK(e.x == doctest::Approx(-pi));
}

TEST_CASE("substep count") {
  CHECK(substeps_for(0.01, 1.0) == 4);
  CHECK(substeps_for(1.0, 10.0) == 40);
  CHECK(substeps_for(-1.0, 10.0) == 40);
  CHECK(substeps_for(0.5, 10.0, 2.0) == 10);
}

TEST_CASE("source point patterns") {
  Mesh2D m(0.0, 1.0, 2, 0.0, 1.0, 2);
  auto c = cell_source_points(m, 3, VertexPattern::Corners);
  REQUIRE(c.size() == 4);
  CHECK(c[0].x == doctest::Approx(0.5));
  CHECK(c[2].y == doctest::Approx(1.0));
  auto n = cell_source_points(m, 0, VertexPattern::Nine);
  REQUIRE(n.size() == 9);
  CHECK(n[4].x == doctest::Approx(0.25));  // bottom midpoint
  CHECK(n[4].y == doctest::Approx(0.0));
  CHECK(n[7].x == doctest::Approx(0.0));   // left midpoint
  CHECK(n[8].x == doctest::Approx(0.25));  // centre
  CHECK(n[8].y == doctest::Approx(0.25));
}
