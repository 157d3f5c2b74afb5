#pragma once

// Velocity fields and backward characteristic tracing (final-value ODE
// solves with classical RK4 substeps).

#include <functional>
#include <string>
#include <vector>

#include "sldg/core.hpp"

namespace sldg {

struct VelocityField1D {
  std::string name;
  std::function<double(double x, double t)> a;
  /// Bound on |a| over the domain and time window, used for the time step.
  double max_speed = 0.0;
  /// True when a does not depend on t.
  bool autonomous = true;
};

struct VelocityField2D {
  std::string name;
  std::function<Point2(double x, double y, double t)> v;
  double max_a = 0.0;
  double max_b = 0.0;
  bool autonomous = true;
};

namespace velocity {
VelocityField1D constant(double c);
VelocityField1D sine();  // a(x) = sin(x)
VelocityField2D constant(double a, double b);
VelocityField2D rigid_rotation();  // (-y, x)
/// (-cos^2(x/2) sin(y) f(t), sin(x) cos^2(y/2) f(t)), f(t) = pi cos(pi t / period)
VelocityField2D swirling(double period);
}  // namespace velocity

/// Number of RK4 substeps for a trace of length `duration`:
/// max(4, ceil(density * duration * max_speed / h)); with density 4 and a
/// full step this is max(4, ceil(4 CFL)).
int substeps_for(double duration, double max_speed_over_h, double density = 4.0);

/// Foot at t_start of the characteristic through (x, t_end). t_start may lie
/// after t_end (stage pairs with decreasing abscissae trace forward).
double trace_back(double x, double t_end, double t_start, const VelocityField1D& v, int substeps);
Point2 trace_back(Point2 p, double t_end, double t_start, const VelocityField2D& v, int substeps);

struct TracedPoint1D {
  double end = 0.0;  // arrival point at t_end
  double t_end = 0.0;
  double t_start = 0.0;
  double foot = 0.0;
};

struct TracedPoint2D {
  Point2 end;
  double t_end = 0.0;
  double t_start = 0.0;
  Point2 foot;
};

/// Feet of the k+1 Gauss-Lobatto points of cell j (midpoint for k = 0), in
/// source order. Feet are not wrapped periodically.
std::vector<TracedPoint1D> trace_interval_feet(const Mesh1D& mesh, int j, double t_end, double t_start,
                                               const VelocityField1D& v, int k, int substeps);

enum class VertexPattern {
  Corners,  // 4 corners, counterclockwise from lower-left
  Nine,     // corners, then edge midpoints (bottom, right, top, left), then center
};

/// Source points of a 2D cell in the canonical order of `pattern`.
std::vector<Point2> cell_source_points(const Mesh2D& mesh, int j, VertexPattern pattern);

std::vector<TracedPoint2D> trace_cell_vertices(const Mesh2D& mesh, int j, double t_end, double t_start,
                                               const VelocityField2D& v, VertexPattern pattern, int substeps);

}  // namespace sldg
