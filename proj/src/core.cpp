#include "sldg/core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace sldg {

Mesh1D::Mesh1D(double xa, double xb, int n) : xa_(xa), xb_(xb), n_(n), dx_((xb - xa) / n) {
  if (n < 2) throw std::invalid_argument("mesh needs at least 2 cells, got " + std::to_string(n));
  if (!(xb > xa)) throw std::invalid_argument("mesh interval must satisfy x_a < x_b");
}

long Mesh1D::locate_unwrapped(double x, Side side) const {
  double s = (x - xa_) / dx_;
  double f = std::floor(s);
  // Snap to an interface when within rounding of it.
  double r = std::nearbyint(s);
  if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s))) {
    return side == Side::Left ? static_cast<long>(r) - 1 : static_cast<long>(r);
  }
  return static_cast<long>(f);
}

double legendre_scaled(int d, double xi) {
  switch (d) {
    case 0: return 1.0;
    case 1: return xi;
    case 2: return xi * xi - 1.0 / 12.0;
    default: throw std::invalid_argument("basis degree must be 0, 1 or 2");
  }
}

double legendre_scaled_deriv(int d, double xi) {
  switch (d) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return 2.0 * xi;
    default: throw std::invalid_argument("basis degree must be 0, 1 or 2");
  }
}

double legendre_scaled_norm2(int d) {
  switch (d) {
    case 0: return 1.0;
    case 1: return 1.0 / 12.0;
    case 2: return 1.0 / 180.0;
    default: throw std::invalid_argument("basis degree must be 0, 1 or 2");
  }
}

void check_degree(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("polynomial degree k must be 0, 1 or 2, got " + std::to_string(k));
}

std::array<int, 2> Basis2D::degrees(int m) {
  static constexpr std::array<std::array<int, 2>, 6> table{{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};
  return table.at(static_cast<std::size_t>(m));
}

namespace {

QuadratureRule make_gauss(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.exactness = 2 * n - 1;
  // Newton iteration on P_n over [-1, 1], then map to [-1/2, 1/2].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = 0.5 * x;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_rule(int n) {
  static constexpr int kMax = 16;
  if (n < 1 || n > kMax) throw std::invalid_argument("Gauss rule size out of range: " + std::to_string(n));
  static std::array<QuadratureRule, kMax + 1> rules;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int i = 1; i <= kMax; ++i) rules[i] = make_gauss(i);
  });
  return rules[n];
}

std::vector<double> lobatto_points(int k) {
  check_degree(k);
  switch (k) {
    case 0: return {0.0};
    case 1: return {-0.5, 0.5};
    default: return {-0.5, 0.0, 0.5};
  }
}

//------------------------------------------------------------------------------

double Field1D::eval_local(int j, double xi) const {
  auto c = cell(j);
  double v = 0.0;
  for (int m = 0; m < dim(); ++m) v += c[m] * basis_.value(m, xi);
  return v;
}

double Field1D::eval(double x, Side side) const {
  long ju = mesh_.locate_unwrapped(x, side);
  int j = mesh_.wrap(ju);
  double xc = mesh_.xa() + (static_cast<double>(ju) + 0.5) * mesh_.dx();
  return eval_local(j, (x - xc) / mesh_.dx());
}

double Field2D::eval_local(int j, double xi, double eta) const {
  auto c = cell(j);
  double v = 0.0;
  for (int m = 0; m < dim(); ++m) v += c[m] * basis_.value(m, xi, eta);
  return v;
}

double Field2D::eval(double x, double y, Side sx, Side sy) const {
  const auto& mx = mesh_.x();
  const auto& my = mesh_.y();
  long ixu = mx.locate_unwrapped(x, sx);
  long iyu = my.locate_unwrapped(y, sy);
  double xc = mx.xa() + (static_cast<double>(ixu) + 0.5) * mx.dx();
  double yc = my.xa() + (static_cast<double>(iyu) + 0.5) * my.dx();
  int j = mesh_.index(mx.wrap(ixu), my.wrap(iyu));
  return eval_local(j, (x - xc) / mx.dx(), (y - yc) / my.dx());
}

Field1D project(const Function1D& f, const Mesh1D& mesh, int k) {
  check_degree(k);
  Field1D u(mesh, k);
  const auto& q = gauss_rule(k + 2);
  for (int j = 0; j < mesh.size(); ++j) {
    auto c = u.cell(j);
    for (std::size_t i = 0; i < q.size(); ++i) {
      double fx = f(mesh.center(j) + q.nodes[i] * mesh.dx());
      for (int m = 0; m < u.dim(); ++m) c[m] += q.weights[i] * fx * u.basis().value(m, q.nodes[i]);
    }
    for (int m = 0; m < u.dim(); ++m) c[m] /= u.basis().norm2(m);
  }
  return u;
}

Field2D project(const Function2D& f, const Mesh2D& mesh, int k) {
  check_degree(k);
  Field2D u(mesh, k);
  const auto& q = gauss_rule(k + 2);
  for (int j = 0; j < mesh.size(); ++j) {
    auto c = u.cell(j);
    Point2 ctr = mesh.center(j);
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t b = 0; b < q.size(); ++b) {
        double w = q.weights[a] * q.weights[b];
        double fx = f(ctr.x + q.nodes[a] * mesh.dx(), ctr.y + q.nodes[b] * mesh.dy());
        for (int m = 0; m < u.dim(); ++m) c[m] += w * fx * u.basis().value(m, q.nodes[a], q.nodes[b]);
      }
    }
    for (int m = 0; m < u.dim(); ++m) c[m] /= u.basis().norm2(m);
  }
  return u;
}

ErrorNorms norms(const Field1D& u, const Function1D& exact) {
  ErrorNorms e;
  const auto& mesh = u.mesh();
  const auto& q = gauss_rule(u.degree() + 3);
  for (int j = 0; j < mesh.size(); ++j) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      double d = std::abs(u.eval_local(j, q.nodes[i]) - exact(mesh.center(j) + q.nodes[i] * mesh.dx()));
      e.l1 += q.weights[i] * mesh.dx() * d;
      e.l2 += q.weights[i] * mesh.dx() * d * d;
      e.linf = std::max(e.linf, d);
    }
  }
  e.l2 = std::sqrt(e.l2);
  return e;
}

ErrorNorms norms(const Field2D& u, const Function2D& exact) {
  ErrorNorms e;
  const auto& mesh = u.mesh();
  const auto& q = gauss_rule(u.degree() + 3);
  double area = mesh.cell_area();
  for (int j = 0; j < mesh.size(); ++j) {
    Point2 ctr = mesh.center(j);
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t b = 0; b < q.size(); ++b) {
        double w = q.weights[a] * q.weights[b] * area;
        double d = std::abs(u.eval_local(j, q.nodes[a], q.nodes[b]) -
                            exact(ctr.x + q.nodes[a] * mesh.dx(), ctr.y + q.nodes[b] * mesh.dy()));
        e.l1 += w * d;
        e.l2 += w * d * d;
        e.linf = std::max(e.linf, d);
      }
    }
  }
  e.l2 = std::sqrt(e.l2);
  return e;
}

double l2_norm(const Field1D& u) {
  double s = 0.0;
  for (int j = 0; j < u.mesh().size(); ++j) {
    auto c = u.cell(j);
    for (int m = 0; m < u.dim(); ++m) s += c[m] * c[m] * u.basis().norm2(m);
  }
  return std::sqrt(s * u.mesh().dx());
}

double l2_norm(const Field2D& u) {
  double s = 0.0;
  for (int j = 0; j < u.mesh().size(); ++j) {
    auto c = u.cell(j);
    for (int m = 0; m < u.dim(); ++m) s += c[m] * c[m] * u.basis().norm2(m);
  }
  return std::sqrt(s * u.mesh().cell_area());
}

double total_mass(const Field1D& u) {
  double s = 0.0;
  for (int j = 0; j < u.mesh().size(); ++j) s += u.cell(j)[0];
  return s * u.mesh().dx();
}

double total_mass(const Field2D& u) {
  double s = 0.0;
  for (int j = 0; j < u.mesh().size(); ++j) s += u.cell(j)[0];
  return s * u.mesh().cell_area();
}

}  // namespace sldg
