#pragma once

// Benchmark problems: domain, velocity, diffusion, source, initial data and
// (when known) the exact solution.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sldg/characteristics.hpp"
#include "sldg/core.hpp"

namespace sldg {

struct Problem1D {
  std::string id;
  std::string description;
  double xa = 0.0, xb = 1.0;
  VelocityField1D velocity;
  double eps = 0.0;
  double t_final = 1.0;
  Boundary bc = Boundary::Periodic;
  std::function<double(double x)> initial;
  std::function<double(double x, double t)> source;  // empty when g = 0
  std::function<double(double x, double t)> exact;   // empty when unknown
};

struct Problem2D {
  std::string id;
  std::string description;
  double xa = 0.0, xb = 1.0, ya = 0.0, yb = 1.0;
  VelocityField2D velocity;
  double eps = 0.0;
  double t_final = 1.0;
  Boundary bc = Boundary::Periodic;
  std::function<double(double x, double y)> initial;
  std::function<double(double x, double y, double t)> source;
  std::function<double(double x, double y, double t)> exact;
};

/// Registered ids, 1D first.
std::vector<std::string> problem_ids();
bool is_problem_2d(std::string_view id);

/// Looks up a problem with diffusion coefficient eps and final time t_final.
/// Exact solutions and sources are rebuilt for the requested eps.
Problem1D make_problem_1d(std::string_view id, double eps, double t_final);
Problem2D make_problem_2d(std::string_view id, double eps, double t_final);

/// Default (eps, t_final) for a registered problem.
std::pair<double, double> problem_defaults(std::string_view id);

/// Slotted disk, cone and smooth hump of radius r centred at distance d from
/// the origin (disk above, cone below, hump to the left).
double bodies_initial(double x, double y, double r, double d);

}  // namespace sldg
