#include "sldg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sldg {

namespace {

constexpr double kPi = std::numbers::pi;

double cosine_bell(double x, double y, double x0, double y0, double r0) {
  const double r = std::hypot(x - x0, y - y0);
  if (r >= r0) return 0.0;
  return r0 * std::pow(std::cos(r * kPi / (2.0 * r0)), 6);
}

[[noreturn]] void unknown(std::string_view id) {
  throw std::invalid_argument("unknown problem '" + std::string(id) + "'");
}

}  // namespace

std::vector<std::string> problem_ids() {
  return {"advect1d", "varcoef1d", "advect2d", "rotation2d", "swirl2d", "bodies_rotation", "bodies_swirl"};
}

bool is_problem_2d(std::string_view id) {
  if (id == "advect1d" || id == "varcoef1d") return false;
  for (const auto& p : problem_ids())
    if (p == id) return true;
  unknown(id);
}

std::pair<double, double> problem_defaults(std::string_view id) {
  if (id == "advect1d" || id == "varcoef1d" || id == "advect2d" || id == "rotation2d") return {1.0, 1.0};
  if (id == "swirl2d") return {1.0, 0.1};
  if (id == "bodies_rotation") return {0.01, 1.0};
  if (id == "bodies_swirl") return {0.01, 1.5};
  unknown(id);
}

double bodies_initial(double x, double y, double r, double d) {
  // Slotted disk above the origin.
  if (std::hypot(x, y - d) < r) {
    const bool in_slot = std::abs(x) < r / 6.0 && y < d + 2.0 * r / 3.0;
    return in_slot ? 0.0 : 1.0;
  }
  // Cone below.
  const double rc = std::hypot(x, y + d);
  if (rc < r) return 1.0 - rc / r;
  // Hump to the left, scaled to unit height.
  return cosine_bell(x, y, -d, 0.0, r) / r;
}

Problem1D make_problem_1d(std::string_view id, double eps, double t_final) {
  Problem1D p;
  p.id = std::string(id);
  p.eps = eps;
  p.t_final = t_final;
  p.xa = 0.0;
  p.xb = 2.0 * kPi;
  if (id == "advect1d") {
    p.description = "u_t + u_x = eps u_xx, u = sin(x - t) exp(-eps t)";
    p.velocity = velocity::constant(1.0);
    p.exact = [eps](double x, double t) { return std::sin(x - t) * std::exp(-eps * t); };
  } else if (id == "varcoef1d") {
    p.description = "u_t + (sin(x) u)_x = eps u_xx + g, u = sin(x) exp(-eps t)";
    p.velocity = velocity::sine();
    p.exact = [eps](double x, double t) { return std::sin(x) * std::exp(-eps * t); };
    p.source = [eps](double x, double t) { return std::sin(2.0 * x) * std::exp(-eps * t); };
  } else {
    unknown(id);
  }
  p.initial = [ex = p.exact](double x) { return ex(x, 0.0); };
  return p;
}

Problem2D make_problem_2d(std::string_view id, double eps, double t_final) {
  Problem2D p;
  p.id = std::string(id);
  p.eps = eps;
  p.t_final = t_final;
  if (id == "advect2d") {
    p.description = "u_t + u_x + u_y = eps lap u, u = sin(x + y - 2t) exp(-2 eps t)";
    p.xa = p.ya = 0.0;
    p.xb = p.yb = 2.0 * kPi;
    p.velocity = velocity::constant(1.0, 1.0);
    p.exact = [eps](double x, double y, double t) { return std::sin(x + y - 2.0 * t) * std::exp(-2.0 * eps * t); };
  } else if (id == "rotation2d") {
    p.description = "rigid rotation (-y, x) with source, u = exp(-(x^2 + 3y^2 + 2 eps t))";
    p.xa = p.ya = -2.0 * kPi;
    p.xb = p.yb = 2.0 * kPi;
    p.velocity = velocity::rigid_rotation();
    p.exact = [eps](double x, double y, double t) { return std::exp(-(x * x + 3.0 * y * y + 2.0 * eps * t)); };
    p.source = [eps](double x, double y, double t) {
      const double u = std::exp(-(x * x + 3.0 * y * y + 2.0 * eps * t));
      return (6.0 * eps - 4.0 * x * y - 4.0 * eps * (x * x + 9.0 * y * y)) * u;
    };
  } else if (id == "swirl2d") {
    p.description = "swirling deformation of a cosine bell";
    p.xa = p.ya = -kPi;
    p.xb = p.yb = kPi;
    p.velocity = velocity::swirling(t_final);
    p.initial = [](double x, double y) { return cosine_bell(x, y, 0.3 * kPi, 0.0, 0.3 * kPi); };
  } else if (id == "bodies_rotation") {
    p.description = "slotted disk, cone and hump under rigid rotation";
    p.xa = p.ya = -2.0 * kPi;
    p.xb = p.yb = 2.0 * kPi;
    p.velocity = velocity::rigid_rotation();
    p.initial = [](double x, double y) { return bodies_initial(x, y, 0.6 * kPi, kPi); };
  } else if (id == "bodies_swirl") {
    p.description = "slotted disk, cone and hump in the swirling flow";
    p.xa = p.ya = -kPi;
    p.xb = p.yb = kPi;
    p.velocity = velocity::swirling(t_final);
    p.initial = [](double x, double y) { return bodies_initial(x, y, 0.3 * kPi, 0.5 * kPi); };
  } else {
    unknown(id);
  }
  if (p.exact) p.initial = [ex = p.exact](double x, double y) { return ex(x, y, 0.0); };
  return p;
}

}  // namespace sldg
