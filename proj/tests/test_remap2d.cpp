#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "sldg/remap2d.hpp"
#include "sldg/remap_ops.hpp"
#include "sldg/verify.hpp"

using namespace sldg;
using std::numbers::pi;

namespace {

Field2D random_field(const Mesh2D& m, int k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field2D f(m, k);
  for (double& c : f.coeffs()) c = u(rng);
  return f;
}

// Loads of cell j translated by -(sx, sy): tensor Gauss over each overlap rectangle.
double translated_load(const Field2D& u, int j, int m, double sx, double sy) {
  const auto& mesh = u.mesh();
  const Point2 c = mesh.center(j);
  auto cuts = [](double a, double b, double origin, double h) {
    std::vector<double> out{a};
    for (long i = static_cast<long>(std::floor((a - origin) / h)) + 1;; ++i) {
      double g = origin + i * h;
      if (g >= b) break;
      out.push_back(g);
    }
    out.push_back(b);
    return out;
  };
  auto xs = cuts(c.x - 0.5 * mesh.dx() - sx, c.x + 0.5 * mesh.dx() - sx, mesh.x().xa(), mesh.dx());
  auto ys = cuts(c.y - 0.5 * mesh.dy() - sy, c.y + 0.5 * mesh.dy() - sy, mesh.y().xa(), mesh.dy());
  const auto& q = gauss_rule(5);
  Basis2D basis(u.degree());
  double sum = 0.0;
  for (std::size_t a = 0; a + 1 < xs.size(); ++a)
    for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
      const double lx = xs[a + 1] - xs[a], ly = ys[b + 1] - ys[b];
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t l = 0; l < q.size(); ++l) {
          double x = xs[a] + (q.nodes[i] + 0.5) * lx, y = ys[b] + (q.nodes[l] + 0.5) * ly;
          double w = q.weights[i] * q.weights[l] * lx * ly;
          sum += w * u.eval(x, y) * basis.value(m, (x + sx - c.x) / mesh.dx(), (y + sy - c.y) / mesh.dy());
        }
    }
  return sum;
}

// Max over background cells of |covered area / cell area - 1| for one remap.
double coverage_defect(const Mesh2D& mesh, const VelocityField2D& v, double te, double ts, RemapMode mode, int k) {
  const double rate = std::max(v.max_a / mesh.dx(), v.max_b / mesh.dy());
  const int sub = substeps_for(te - ts, rate);
  std::vector<double> covered(mesh.size(), 0.0);
  for (int j = 0; j < mesh.size(); ++j) {
    auto up = build_upstream_2d(mesh, j, te, ts, v, k, mode, sub);
    for (const auto& r : clip_upstream(up, mesh)) covered[r.background] += r.area();
  }
  double worst = 0.0;
  for (double a : covered) worst = std::max(worst, std::abs(a / mesh.cell_area() - 1.0));
  return worst;
}

}  // namespace

TEST_CASE("quadratic curve through three points") {
  Point2 p0{0.0, 0.0}, pm{0.6, 0.3}, p1{1.0, 1.0};
  auto cv = Curve::through(p0, pm, p1);
  CHECK(cv.quadratic);
  CHECK(cv.at(0.5).x == doctest::Approx(0.6));
  CHECK(cv.at(0.5).y == doctest::Approx(0.3));
  CHECK(cv.end().x == doctest::Approx(1.0));
  auto ln = Curve::line(p0, p1);
  CHECK(ln.at(0.25).y == doctest::Approx(0.25));
  auto sub = cv.sub(0.25, 0.75);
  CHECK(sub.start().x == doctest::Approx(cv.at(0.25).x));
}

TEST_CASE("moments of a full background cell") {
  OverlapRegion r;
  r.x0 = 1.0;
  r.y0 = -2.0;
  r.dx = 0.5;
  r.dy = 0.25;
  Point2 c0{1.0, -2.0}, c1{1.5, -2.0}, c2{1.5, -1.75}, c3{1.0, -1.75};
  r.boundary = {Curve::line(c0, c1), Curve::line(c1, c2), Curve::line(c2, c3), Curve::line(c3, c0)};
  auto mom = region_moments(r, 4);
  const double area = 0.125;
  CHECK(mom.c[0][0] == doctest::Approx(area));
  CHECK(std::abs(mom.c[1][0]) < 1e-15);
  CHECK(std::abs(mom.c[1][1]) < 1e-15);
  CHECK(mom.c[2][0] == doctest::Approx(area / 12.0));
  CHECK(mom.c[2][2] == doctest::Approx(area / 144.0));
  CHECK(mom.c[4][0] == doctest::Approx(area / 80.0));
  CHECK(r.area() == doctest::Approx(area));
}

TEST_CASE("whole-cell translation gives the mass matrix block") {
  Mesh2D mesh(0.0, 1.0, 8, 0.0, 1.0, 8);
  auto v = velocity::constant(2.0, 1.0);
  const double dt = mesh.dx();  // two cells right, one up
  for (auto mode : {RemapMode::Quad, RemapMode::QC}) {
    auto up = build_upstream_2d(mesh, mesh.index(5, 5), dt, 0.0, v, 2, mode, 4);
    auto regions = clip_upstream(up, mesh);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].background == mesh.index(3, 4));
    auto w = region_weights(up, regions[0]);
    Basis2D b(2);
    for (int m = 0; m < 6; ++m)
      for (int n = 0; n < 6; ++n)
        CHECK(w[m * 6 + n] == doctest::Approx(m == n ? b.norm2(m) * mesh.cell_area() : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("arbitrary translation matches the tensor-Gauss oracle") {
  Mesh2D mesh(0.0, 2.0, 6, -1.0, 1.0, 5);
  for (int k = 0; k <= 2; ++k) {
    auto u = random_field(mesh, k, 20 + k);
    for (auto [a, b] : {std::pair{0.37, -0.81}, {-2.3, 1.1}}) {
      auto v = velocity::constant(a, b);
      const double dt = 0.17;
      for (auto mode : {RemapMode::Quad, RemapMode::QC}) {
        for (int j = 0; j < mesh.size(); j += 7) {
          auto up = build_upstream_2d(mesh, j, dt, 0.0, v, k, mode, 4);
          CHECK(up.ls_residual < 1e-12);
          auto loads = remap_term1_2d(u, up);
          for (int m = 0; m < u.dim(); ++m)
            CHECK(loads[m] == doctest::Approx(translated_load(u, j, m, a * dt, b * dt)).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("upstream cells tile the domain") {
  Mesh2D mesh(-pi, pi, 24, -pi, pi, 24);
  auto v = velocity::swirling(1.5);
  for (auto mode : {RemapMode::Quad, RemapMode::QC})
    for (double dt : {0.05, 0.4}) CHECK(coverage_defect(mesh, v, 0.3 + dt, 0.3, mode, 2) < 1e-11);
}

TEST_CASE("tiling survives feet and arcs grazing grid lines") {
  // Stage pairs where traced feet land within ~1e-9 of grid lines along the
  // no-flow boundary of the swirling field, or edges end just past a corner.
  auto v = velocity::swirling(0.1);
  struct Case {
    int n;
    RemapMode mode;
    double te, ts;
  };
  const Case cases[] = {
      {60, RemapMode::QC, 0.025833333333333333, 0.029166666666666667},
      {60, RemapMode::QC, 0.041666666666666664, 0.042499999999999996},
      {60, RemapMode::Quad, 0.041666666666666664, 0.042499999999999996},
      {60, RemapMode::Quad, 0.050000000000000003, 0.045833333333333337},
      {100, RemapMode::Quad, 0.015000000000000003, 0.015500000000000003},
      {150, RemapMode::QC, 0.0033333333333333335, 0.0036666666666666667},
      {150, RemapMode::Quad, 0.050333333333333334, 0.046666666666666669},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.te);
    Mesh2D mesh(-pi, pi, c.n, -pi, pi, c.n);
    CHECK(coverage_defect(mesh, v, c.te, c.ts, c.mode, 2) < 1e-11);
  }
}

TEST_CASE("Green areas match polygon clipping for straight upstream cells") {
  Mesh2D mesh(0.0, 1.0, 10, 0.0, 1.0, 10);
  auto v = velocity::rigid_rotation();
  for (double dt : {0.05, 0.3}) {
    auto up = build_upstream_2d(mesh, mesh.index(6, 3), dt, 0.0, v, 1, RemapMode::Quad, 16);
    std::vector<std::array<double, 2>> poly;
    for (int i = 0; i < 4; ++i) poly.push_back({up.feet[i].x, up.feet[i].y});
    double total = 0.0;
    for (const auto& r : clip_upstream(up, mesh)) {
      double ref = verify::clipped_polygon_area(poly, r.x0, r.y0, r.x0 + r.dx, r.y0 + r.dy);
      CHECK(r.area() == doctest::Approx(ref).epsilon(1e-11));
      total += r.area();
    }
    CHECK(total == doctest::Approx(upstream_area(up)).epsilon(1e-12));
  }
}

TEST_CASE("remap matrix: mass conservation and zero duration") {
  Mesh2D mesh(-pi, pi, 12, -pi, pi, 12);
  auto v = velocity::swirling(1.5);
  auto u = random_field(mesh, 1, 3);
  auto r = remap_matrix_2d(mesh, 1, 0.6, 0.2, v, RemapMode::QC, 16);
  auto loads = r.apply(u.coeffs());
  double before = 0.0, after = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    before += u.cell(j)[0] * mesh.cell_area();
    after += loads[3 * j];
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-12));

  auto id = remap_matrix_2d(mesh, 2, 0.4, 0.4, v, RemapMode::Quad, 4);
  Basis2D b(2);
  for (int j = 0; j < mesh.size(); j += 5) {
    auto blk = id.block(j, j);
    REQUIRE(blk.size() == 36);
    for (int m = 0; m < 6; ++m) CHECK(blk[m * 6 + m] == doctest::Approx(b.norm2(m) * mesh.cell_area()));
    CHECK(id.block_cols_of(j).size() == 1);
  }
}

TEST_CASE("folded upstream cells are rejected") {
  Mesh2D mesh(0.0, 1.0, 8, 0.0, 1.0, 8);
  // Flow converging on x = 0.5625: one coarse step carries the left and right
  // corners of the cell past each other, reversing its orientation.
  VelocityField2D v{"fold", [](double x, double, double) { return Point2{10.0 * std::tanh((x - 0.5625) / 1e-3), 0.0}; },
                    10.0, 0.0, true};
  CHECK_THROWS_AS(build_upstream_2d(mesh, mesh.index(4, 4), 0.01, 0.0, v, 1, RemapMode::Quad, 1), GeometryError);
}
