#include "sldg/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sldg {

namespace velocity {

VelocityField1D constant(double c) {
  return {"constant", [c](double, double) { return c; }, std::abs(c), true};
}

VelocityField1D sine() {
  return {"sine", [](double x, double) { return std::sin(x); }, 1.0, true};
}

VelocityField2D constant(double a, double b) {
  return {"constant", [a, b](double, double, double) { return Point2{a, b}; }, std::abs(a), std::abs(b), true};
}

VelocityField2D rigid_rotation() {
  // Bounds are set by the caller's domain; 2*pi covers [-2pi, 2pi]^2.
  return {"rigid_rotation", [](double x, double y, double) { return Point2{-y, x}; }, 2.0 * std::numbers::pi,
          2.0 * std::numbers::pi, true};
}

VelocityField2D swirling(double period) {
  const double pi = std::numbers::pi;
  return {"swirling",
          [period, pi](double x, double y, double t) {
            double f = pi * std::cos(pi * t / period);
            double cx = std::cos(0.5 * x), cy = std::cos(0.5 * y);
            return Point2{-cx * cx * std::sin(y) * f, std::sin(x) * cy * cy * f};
          },
          pi, pi, false};
}

}  // namespace velocity

int substeps_for(double duration, double max_speed_over_h, double density) {
  double n = std::ceil(density * std::abs(duration) * max_speed_over_h - 1e-9);
  return std::max(4, static_cast<int>(n));
}

double trace_back(double x, double t_end, double t_start, const VelocityField1D& v, int substeps) {
  if (substeps < 1) throw std::invalid_argument("trace_back: substeps must be >= 1");
  if (t_start == t_end) return x;
  const double h = (t_end - t_start) / substeps;
  double t = t_end;
  for (int s = 0; s < substeps; ++s) {
    // Integrate dx/dt = a(x, t) with step -h.
    double k1 = v.a(x, t);
    double k2 = v.a(x - 0.5 * h * k1, t - 0.5 * h);
    double k3 = v.a(x - 0.5 * h * k2, t - 0.5 * h);
    double k4 = v.a(x - h * k3, t - h);
    x -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t_end - (s + 1) * h;
  }
  return x;
}

Point2 trace_back(Point2 p, double t_end, double t_start, const VelocityField2D& v, int substeps) {
  if (substeps < 1) throw std::invalid_argument("trace_back: substeps must be >= 1");
  if (t_start == t_end) return p;
  const double h = (t_end - t_start) / substeps;
  double t = t_end;
  for (int s = 0; s < substeps; ++s) {
    Point2 k1 = v.v(p.x, p.y, t);
    Point2 q2 = p - (0.5 * h) * k1;
    Point2 k2 = v.v(q2.x, q2.y, t - 0.5 * h);
    Point2 q3 = p - (0.5 * h) * k2;
    Point2 k3 = v.v(q3.x, q3.y, t - 0.5 * h);
    Point2 q4 = p - h * k3;
    Point2 k4 = v.v(q4.x, q4.y, t - h);
    p.x -= h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    p.y -= h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    t = t_end - (s + 1) * h;
  }
  return p;
}

std::vector<TracedPoint1D> trace_interval_feet(const Mesh1D& mesh, int j, double t_end, double t_start,
                                               const VelocityField1D& v, int k, int substeps) {
  std::vector<TracedPoint1D> out;
  for (double xi : lobatto_points(k)) {
    double x = mesh.center(j) + xi * mesh.dx();
    out.push_back({x, t_end, t_start, trace_back(x, t_end, t_start, v, substeps)});
  }
  return out;
}

std::vector<Point2> cell_source_points(const Mesh2D& mesh, int j, VertexPattern pattern) {
  const double x0 = mesh.x().left(mesh.ix(j)), x1 = mesh.x().right(mesh.ix(j));
  const double y0 = mesh.y().left(mesh.iy(j)), y1 = mesh.y().right(mesh.iy(j));
  std::vector<Point2> pts{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  if (pattern == VertexPattern::Nine) {
    const double xm = mesh.x().center(mesh.ix(j)), ym = mesh.y().center(mesh.iy(j));
    pts.insert(pts.end(), {{xm, y0}, {x1, ym}, {xm, y1}, {x0, ym}, {xm, ym}});
  }
  return pts;
}

std::vector<TracedPoint2D> trace_cell_vertices(const Mesh2D& mesh, int j, double t_end, double t_start,
                                               const VelocityField2D& v, VertexPattern pattern, int substeps) {
  std::vector<TracedPoint2D> out;
  for (Point2 p : cell_source_points(mesh, j, pattern))
    out.push_back({p, t_end, t_start, trace_back(p, t_end, t_start, v, substeps)});
  return out;
}

}  // namespace sldg
