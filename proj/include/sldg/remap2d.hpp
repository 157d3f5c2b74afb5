#pragma once

// Term-I evaluation in 2D: upstream cells traced from Eulerian cells, test
// functions reconstructed by least squares, upstream regions cut against the
// Cartesian background mesh and integrated with Green's theorem.

#include <array>
#include <stdexcept>
#include <vector>

#include "sldg/characteristics.hpp"
#include "sldg/core.hpp"
#include "sldg/poly2.hpp"

namespace sldg {

enum class RemapMode {
  Quad,  // straight-sided upstream quadrilateral
  QC,    // quadratic-curved edges through the traced edge midpoints
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parametric curve a + b tau + c tau^2 restricted to tau in [t0, t1].
struct Curve {
  Point2 a, b, c;
  double t0 = 0.0;
  double t1 = 1.0;
  bool quadratic = false;

  static Curve line(Point2 p, Point2 q);
  /// Quadratic through p0 (tau=0), pm (tau=1/2), p1 (tau=1).
  static Curve through(Point2 p0, Point2 pm, Point2 p1);

  Point2 at(double tau) const { return {a.x + tau * (b.x + tau * c.x), a.y + tau * (b.y + tau * c.y)}; }
  Point2 deriv(double tau) const { return {b.x + 2.0 * tau * c.x, b.y + 2.0 * tau * c.y}; }
  Point2 start() const { return at(t0); }
  Point2 end() const { return at(t1); }
  Curve sub(double s0, double s1) const {
    Curve r = *this;
    r.t0 = s0;
    r.t1 = s1;
    return r;
  }
};

/// Intersection of one upstream cell with one background cell.
struct OverlapRegion {
  int background = 0;  // wrapped background cell index
  int ix = 0, iy = 0;  // unwrapped background indices
  double x0 = 0.0, y0 = 0.0, dx = 1.0, dy = 1.0;  // unwrapped background rectangle
  std::vector<Curve> boundary;                     // closed, counterclockwise

  double area() const;
  double xc() const { return x0 + 0.5 * dx; }
  double yc() const { return y0 + 0.5 * dy; }
};

struct UpstreamCell2D {
  int cell = 0;
  int k = 0;
  RemapMode mode = RemapMode::Quad;
  double t_end = 0.0;
  double t_start = 0.0;
  std::vector<Point2> sources;
  std::vector<Point2> feet;  // periodic shift already applied
  Point2 shift;

  /// Test polynomial m in s = (x - origin.x) / sx, t = (y - origin.y) / sy.
  Point2 origin;
  double sx = 1.0, sy = 1.0;
  std::vector<Poly2> tests;
  double ls_residual = 0.0;  // max |Psi*_m(foot) - Psi_m(source)|

  std::array<double, 4> bbox{};  // xmin, xmax, ymin, ymax of the boundary

  double eval_test(int m, Point2 p) const { return tests[m]((p.x - origin.x) / sx, (p.y - origin.y) / sy); }
  /// Outer boundary: 4 straight or quadratic edges, counterclockwise.
  std::vector<Curve> boundary() const;
};

UpstreamCell2D build_upstream_2d(const Mesh2D& mesh, int j, double t_end, double t_start, const VelocityField2D& v,
                                 int k, RemapMode mode, int substeps, Boundary bc = Boundary::Periodic);

std::vector<OverlapRegion> clip_upstream(const UpstreamCell2D& up, const Mesh2D& mesh,
                                         Boundary bc = Boundary::Periodic);

/// Moments m[a][b] = integral over the region of xi^a eta^b dx dy for
/// a + b <= max_degree, with (xi, eta) the background cell's local
/// coordinates. Evaluated as line integrals of Q dy, Q the xi-antiderivative
/// anchored at the cell's left edge.
Poly2 region_moments(const OverlapRegion& region, int max_degree);

/// Integral over the region of an integrand given in the background cell's
/// local coordinates (xi, eta).
double green_integral(const OverlapRegion& region, const Poly2& integrand);

/// Signed area enclosed by the upstream boundary (parametric shoelace).
double upstream_area(const UpstreamCell2D& up);

/// Loads (u, Psi*_m) over the upstream cell, m = 0..dim-1.
std::vector<double> remap_term1_2d(const Field2D& u, const UpstreamCell2D& up, Boundary bc = Boundary::Periodic);

/// dim x dim block W (row-major) with W[m][n] = integral over the region of
/// Psi*_m phi_n, phi_n the background basis.
std::vector<double> region_weights(const UpstreamCell2D& up, const OverlapRegion& region);

}  // namespace sldg
