#include "sldg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sldg/bench.hpp"
#include "sldg/ldg.hpp"
#include "sldg/remap1d.hpp"
#include "sldg/remap2d.hpp"
#include "sldg/timeint.hpp"

namespace sldg::verify {

namespace {

constexpr double kPi = std::numbers::pi;

Check make(std::string suite, std::string name, double value, double tol, bool pass_if_below = true) {
  Check c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tol;
  c.passed = pass_if_below ? (std::isfinite(value) && value <= tol) : (std::isfinite(value) && value >= tol);
  return c;
}

std::string label(const std::string& what, int k) { return what + " k=" + std::to_string(k); }

void randomize(std::vector<double>& v, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (double& x : v) x = d(rng);
}

// Breakpoints of (a, b) at grid lines origin + i h + s.
std::vector<double> shifted_breaks(double a, double b, double origin, double h, double s) {
  std::vector<double> out{a};
  long i = static_cast<long>(std::floor((a - s - origin) / h)) + 1;
  for (;; ++i) {
    double g = origin + static_cast<double>(i) * h + s;
    if (g >= b - 1e-14 * h) break;
    if (g > a + 1e-14 * h) out.push_back(g);
  }
  out.push_back(b);
  return out;
}

}  // namespace

std::vector<Check> basis_orthogonality() {
  std::vector<Check> out;
  const auto& q = gauss_rule(6);
  for (int k = 0; k <= 2; ++k) {
    Basis1D b1(k);
    double err1 = 0.0;
    for (int m = 0; m < b1.dim(); ++m)
      for (int n = 0; n < b1.dim(); ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * b1.value(m, q.nodes[i]) * b1.value(n, q.nodes[i]);
        err1 = std::max(err1, std::abs(s - (m == n ? b1.norm2(m) : 0.0)));
      }
    out.push_back(make("basis", label("1D Gram matrix", k), err1, 1e-15));
    Basis2D b2(k);
    double err2 = 0.0;
    for (int m = 0; m < b2.dim(); ++m)
      for (int n = 0; n < b2.dim(); ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
          for (std::size_t l = 0; l < q.size(); ++l)
            s += q.weights[i] * q.weights[l] * b2.value(m, q.nodes[i], q.nodes[l]) * b2.value(n, q.nodes[i], q.nodes[l]);
        err2 = std::max(err2, std::abs(s - (m == n ? b2.norm2(m) : 0.0)));
      }
    out.push_back(make("basis", label("2D Gram matrix", k), err2, 1e-15));
  }
  return out;
}

std::vector<Check> gauss_exactness() {
  std::vector<Check> out;
  double worst = 0.0;
  for (int n = 1; n <= 16; ++n) {
    const auto& q = gauss_rule(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], p);
      const double exact = (std::pow(0.5, p + 1) - std::pow(-0.5, p + 1)) / (p + 1);
      worst = std::max(worst, std::abs(s - exact));
    }
  }
  out.push_back(make("gauss", "monomials up to degree 2n-1, n=1..16", worst, 1e-14));
  return out;
}

std::vector<Check> tracer_convergence() {
  const auto v = velocity::sine();
  const double t_end = 1.0, t_start = 0.0;
  std::vector<double> subs{2, 4, 8, 16}, errs;
  for (double n : subs) {
    double e = 0.0;
    for (double x : {0.4, 1.3, 2.2, 2.9}) {
      const double exact = 2.0 * std::atan(std::tan(0.5 * x) * std::exp(-(t_end - t_start)));
      e = std::max(e, std::abs(trace_back(x, t_end, t_start, v, static_cast<int>(n)) - exact));
    }
    errs.push_back(e);
  }
  const double order = -fitted_slope(subs, errs);
  auto c = make("tracer", "RK4 order on a(x)=sin(x)", std::abs(order - 4.0), 0.3);
  c.detail = "fitted order " + format_number(order);
  return {c};
}

std::vector<Check> remap_tiling_and_translation() {
  std::vector<Check> out;
  // 1D: upstream intervals tile the domain; translation is exact.
  for (int k = 0; k <= 2; ++k) {
    Mesh1D mesh(0.0, 2.0 * kPi, 16);
    Field1D u(mesh, k);
    randomize(u.coeffs(), 11 + k);
    const auto vel = velocity::constant(1.0);
    for (double cells : {0.37, 2.6}) {
      const double s = cells * mesh.dx();
      double tiling = -mesh.length(), err = 0.0;
      Basis1D basis(k);
      const auto& q = gauss_rule(8);
      for (int j = 0; j < mesh.size(); ++j) {
        auto up = build_upstream_1d(mesh, j, s, 0.0, vel, k, 8);
        for (const auto& pc : split_subintervals(up, mesh)) tiling += pc.b - pc.a;
        auto loads = remap_term1_1d(u, up);
        {
          const auto br = shifted_breaks(mesh.left(j), mesh.right(j), mesh.xa(), mesh.dx(), s);
          std::vector<double> oracle(basis.dim(), 0.0);
          for (std::size_t p = 0; p + 1 < br.size(); ++p)
            for (std::size_t i = 0; i < q.size(); ++i) {
              const double len = br[p + 1] - br[p];
              const double x = br[p] + (q.nodes[i] + 0.5) * len;
              // Trace from the side of the sub-piece interior.
              const double val = u.eval(x - s, Side::Right);
              for (int m = 0; m < basis.dim(); ++m)
                oracle[m] += q.weights[i] * len * val * basis.value(m, (x - mesh.center(j)) / mesh.dx());
            }
          for (int m = 0; m < basis.dim(); ++m) err = std::max(err, std::abs(oracle[m] - loads[m]));
        }
      }
      out.push_back(make("remap1d", label("tiling shift " + format_number(cells) + " cells", k), std::abs(tiling), 1e-11));
      out.push_back(make("remap1d", label("translation shift " + format_number(cells) + " cells", k), err, 1e-11));
    }
  }
  // 2D translation against a direct sub-rectangle projection.
  for (int k = 0; k <= 2; ++k) {
    Mesh2D mesh(0.0, 1.0, 8, 0.0, 1.0, 8);
    Field2D u(mesh, k);
    randomize(u.coeffs(), 23 + k);
    const auto vel = velocity::constant(0.7, -0.45);
    const double dt = 0.31;
    const double sx = 0.7 * dt, sy = -0.45 * dt;
    Basis2D basis(k);
    const auto& q = gauss_rule(6);
    double err = 0.0;
    for (auto mode : {RemapMode::Quad, RemapMode::QC}) {
      for (int j = 0; j < mesh.size(); ++j) {
        auto up = build_upstream_2d(mesh, j, dt, 0.0, vel, k, mode, 8);
        auto loads = remap_term1_2d(u, up);
        const int ix = mesh.ix(j), iy = mesh.iy(j);
        auto bx = shifted_breaks(mesh.x().left(ix), mesh.x().right(ix), 0.0, mesh.dx(), sx);
        auto by = shifted_breaks(mesh.y().left(iy), mesh.y().right(iy), 0.0, mesh.dy(), sy);
        std::vector<double> oracle(basis.dim(), 0.0);
        const Point2 c = mesh.center(j);
        for (std::size_t a = 0; a + 1 < bx.size(); ++a)
          for (std::size_t b = 0; b + 1 < by.size(); ++b) {
            const double lx = bx[a + 1] - bx[a], ly = by[b + 1] - by[b];
            for (std::size_t i = 0; i < q.size(); ++i)
              for (std::size_t l = 0; l < q.size(); ++l) {
                const double x = bx[a] + (q.nodes[i] + 0.5) * lx, y = by[b] + (q.nodes[l] + 0.5) * ly;
                const double w = q.weights[i] * q.weights[l] * lx * ly * u.eval(x - sx, y - sy);
                for (int m = 0; m < basis.dim(); ++m)
                  oracle[m] += w * basis.value(m, (x - c.x) / mesh.dx(), (y - c.y) / mesh.dy());
              }
          }
        for (int m = 0; m < basis.dim(); ++m) err = std::max(err, std::abs(oracle[m] - loads[m]));
      }
    }
    out.push_back(make("remap2d", label("translation quad+qc", k), err, 1e-11));
  }
  // 2D tiling: every background cell is covered exactly once.
  struct Flow {
    std::string name;
    VelocityField2D v;
    double lo, hi, dt;
  };
  // The flow must be periodic on the domain for the upstream cells to tile it.
  VelocityField2D shear{"shear", [](double x, double y, double) { return Point2{std::sin(y) + 0.5, 0.5 * std::cos(x)}; },
                        1.5, 0.5, true};
  for (const auto& fl : {Flow{"shear", shear, 0.0, 2.0 * kPi, 0.6},
                         Flow{"swirl", velocity::swirling(1.5), -kPi, kPi, 0.3}}) {
    for (auto mode : {RemapMode::Quad, RemapMode::QC}) {
      Mesh2D mesh(fl.lo, fl.hi, 12, fl.lo, fl.hi, 12);
      std::vector<double> cover(mesh.size(), 0.0);
      double total = 0.0;
      for (int j = 0; j < mesh.size(); ++j) {
        auto up = build_upstream_2d(mesh, j, 0.5 + fl.dt, 0.5, fl.v, 2, mode, 16);
        for (const auto& r : clip_upstream(up, mesh)) {
          const double a = r.area();
          cover[r.background] += a;
          total += a;
        }
      }
      double err = 0.0;
      for (double c : cover) err = std::max(err, std::abs(c - mesh.cell_area()) / mesh.cell_area());
      const std::string m = mode == RemapMode::QC ? "qc" : "quad";
      out.push_back(make("remap2d", "tiling " + fl.name + " " + m + " (per-cell coverage)", err, 1e-11));
      const double dom = (fl.hi - fl.lo) * (fl.hi - fl.lo);
      out.push_back(make("remap2d", "tiling " + fl.name + " " + m + " (total area)", std::abs(total - dom) / dom, 1e-11));
    }
  }
  return out;
}

double clipped_polygon_area(const std::vector<std::array<double, 2>>& poly, double x0, double y0, double x1,
                            double y1) {
  using P = std::array<double, 2>;
  std::vector<P> cur = poly;
  auto clip = [&](auto inside, auto intersect) {
    std::vector<P> next;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const P& a = cur[i];
      const P& b = cur[(i + 1) % cur.size()];
      const bool ia = inside(a), ib = inside(b);
      if (ia && ib) next.push_back(b);
      else if (ia && !ib) next.push_back(intersect(a, b));
      else if (!ia && ib) {
        next.push_back(intersect(a, b));
        next.push_back(b);
      }
    }
    cur = std::move(next);
  };
  auto at_x = [](double x) {
    return [x](const P& a, const P& b) { return P{x, a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])}; };
  };
  auto at_y = [](double y) {
    return [y](const P& a, const P& b) { return P{a[0] + (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]), y}; };
  };
  clip([&](const P& p) { return p[0] >= x0; }, at_x(x0));
  if (!cur.empty()) clip([&](const P& p) { return p[0] <= x1; }, at_x(x1));
  if (!cur.empty()) clip([&](const P& p) { return p[1] >= y0; }, at_y(y0));
  if (!cur.empty()) clip([&](const P& p) { return p[1] <= y1; }, at_y(y1));
  double a = 0.0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    const P& p = cur[i];
    const P& q = cur[(i + 1) % cur.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return std::abs(0.5 * a);
}

std::vector<Check> green_area_vs_clipping() {
  std::vector<Check> out;
  Mesh2D mesh(-2.0 * kPi, 2.0 * kPi, 10, -2.0 * kPi, 2.0 * kPi, 10);
  const auto vel = velocity::rigid_rotation();
  double worst = 0.0, missing = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    auto up = build_upstream_2d(mesh, j, 0.4, 0.0, vel, 1, RemapMode::Quad, 16);
    std::vector<std::array<double, 2>> poly;
    for (int i = 0; i < 4; ++i) poly.push_back({up.feet[i].x, up.feet[i].y});
    const auto regions = clip_upstream(up, mesh);
    double sum_green = 0.0, sum_clip = 0.0;
    for (const auto& r : regions) {
      const double clipped = clipped_polygon_area(poly, r.x0, r.y0, r.x0 + r.dx, r.y0 + r.dy);
      worst = std::max(worst, std::abs(r.area() - clipped) / mesh.cell_area());
      sum_green += r.area();
    }
    // Cells of the bounding box that Green's pass skipped must be empty.
    const long ix0 = std::lround(std::floor((up.bbox[0] - mesh.x().xa()) / mesh.dx()));
    const long ix1 = std::lround(std::floor((up.bbox[1] - mesh.x().xa()) / mesh.dx()));
    const long iy0 = std::lround(std::floor((up.bbox[2] - mesh.y().xa()) / mesh.dy()));
    const long iy1 = std::lround(std::floor((up.bbox[3] - mesh.y().xa()) / mesh.dy()));
    for (long cy = iy0; cy <= iy1; ++cy)
      for (long cx = ix0; cx <= ix1; ++cx) {
        const double x0 = mesh.x().xa() + cx * mesh.dx(), y0 = mesh.y().xa() + cy * mesh.dy();
        sum_clip += clipped_polygon_area(poly, x0, y0, x0 + mesh.dx(), y0 + mesh.dy());
      }
    missing = std::max(missing, std::abs(sum_clip - sum_green) / mesh.cell_area());
  }
  out.push_back(make("green", "per-region area vs Sutherland-Hodgman", worst, 1e-11));
  out.push_back(make("green", "no overlap missed inside the bounding box", missing, 1e-11));
  return out;
}

std::vector<Check> ldg_energy_identity() {
  std::vector<Check> out;
  for (int k = 0; k <= 2; ++k) {
    {
      Mesh1D mesh(0.0, 2.0 * kPi, 16);
      auto op = assemble_ldg_1d(mesh, k);
      std::vector<double> u(op.size());
      randomize(u, 101 + k);
      auto d = dissipativity_check(op, u);
      auto c = make("ldg", label("1D energy identity", k), std::abs(d.s + d.q_norm2) / d.q_norm2, 1e-11);
      c.passed = c.passed && d.s <= 0.0;
      out.push_back(c);
    }
    {
      Mesh2D mesh(0.0, 2.0 * kPi, 8, 0.0, 2.0 * kPi, 8);
      auto op = assemble_ldg_2d(mesh, k);
      std::vector<double> u(op.size());
      randomize(u, 201 + k);
      auto d = dissipativity_check(op, u);
      auto c = make("ldg", label("2D energy identity", k), std::abs(d.s + d.q_norm2) / d.q_norm2, 1e-11);
      c.passed = c.passed && d.s <= 0.0;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Check> tableau_invariants() {
  std::vector<Check> out;
  for (const auto& t : {tableau::backward_euler(), tableau::dirk2(), tableau::dirk3(), tableau::dirk4()}) {
    double worst = 0.0;
    bool structural = true;
    for (int i = 0; i < t.stages(); ++i) {
      double row = 0.0;
      for (int j = 0; j < t.stages(); ++j) {
        row += t.A[i][j];
        if (j > i && t.A[i][j] != 0.0) structural = false;
      }
      if (t.A[i][i] == 0.0) structural = false;
      worst = std::max(worst, std::abs(row - t.c[i]));
      worst = std::max(worst, std::abs(t.A[t.stages() - 1][i] - t.b[i]));
    }
    auto c = make("tableau", t.name + " row sums and stiff accuracy", worst, 1e-14);
    c.passed = c.passed && structural;
    out.push_back(c);
  }
  return out;
}

std::vector<Check> run_all() {
  std::vector<Check> all;
  for (auto suite : {basis_orthogonality, gauss_exactness, tracer_convergence, remap_tiling_and_translation,
                     green_area_vs_clipping, ldg_energy_identity, tableau_invariants}) {
    auto part = suite();
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace sldg::verify
