#pragma once

// Meshes, scaled-Legendre bases, Gauss rules and piecewise-polynomial fields
// shared by the 1D and 2D transport/diffusion modules.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sldg {

enum class Boundary { Periodic, Zero };

/// Which one-sided trace to take when a point sits exactly on a cell interface.
enum class Side { Left, Right };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

//------------------------------------------------------------------------------
// Meshes
//------------------------------------------------------------------------------

/// Uniform partition of [x_a, x_b] into n cells. Cells are 0-based here;
/// cell j spans [x_a + j dx, x_a + (j+1) dx].
class Mesh1D {
 public:
  Mesh1D(double xa, double xb, int n);

  double xa() const { return xa_; }
  double xb() const { return xb_; }
  int size() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return xb_ - xa_; }

  double left(int j) const { return xa_ + j * dx_; }
  double right(int j) const { return xa_ + (j + 1) * dx_; }
  double center(int j) const { return xa_ + (j + 0.5) * dx_; }

  /// Unwrapped cell index containing x (may be negative or >= size()).
  /// On an interface, Side::Left selects the cell to the left.
  long locate_unwrapped(double x, Side side = Side::Right) const;

  int wrap(long j) const {
    long r = j % n_;
    return static_cast<int>(r < 0 ? r + n_ : r);
  }

 private:
  double xa_, xb_;
  int n_;
  double dx_;
};

/// Tensor-product uniform mesh; cell (ix, iy) has linear index ix + nx * iy.
class Mesh2D {
 public:
  Mesh2D(double xa, double xb, int nx, double ya, double yb, int ny)
      : x_(xa, xb, nx), y_(ya, yb, ny) {}

  const Mesh1D& x() const { return x_; }
  const Mesh1D& y() const { return y_; }
  int nx() const { return x_.size(); }
  int ny() const { return y_.size(); }
  int size() const { return nx() * ny(); }
  double dx() const { return x_.dx(); }
  double dy() const { return y_.dx(); }
  double cell_area() const { return dx() * dy(); }

  int index(int ix, int iy) const { return ix + nx() * iy; }
  int ix(int j) const { return j % nx(); }
  int iy(int j) const { return j / nx(); }
  Point2 center(int j) const { return {x_.center(ix(j)), y_.center(iy(j))}; }

 private:
  Mesh1D x_, y_;
};

//------------------------------------------------------------------------------
// Bases
//------------------------------------------------------------------------------

/// Scaled Legendre polynomial of degree d in xi in [-1/2, 1/2]:
/// 1, xi, xi^2 - 1/12.
double legendre_scaled(int d, double xi);
double legendre_scaled_deriv(int d, double xi);
/// Integral of legendre_scaled(d)^2 over [-1/2, 1/2].
double legendre_scaled_norm2(int d);

void check_degree(int k);

/// {1, xi, xi^2 - 1/12} truncated to degree k.
struct Basis1D {
  int k = 0;

  explicit Basis1D(int degree) : k(degree) { check_degree(degree); }
  int dim() const { return k + 1; }
  double value(int m, double xi) const { return legendre_scaled(m, xi); }
  double deriv(int m, double xi) const { return legendre_scaled_deriv(m, xi); }
  double norm2(int m) const { return legendre_scaled_norm2(m); }
};

/// Total-degree P^k built from products of scaled Legendre polynomials:
/// ordering 1, xi, eta, xi^2-1/12, xi*eta, eta^2-1/12.
struct Basis2D {
  int k = 0;

  explicit Basis2D(int degree) : k(degree) { check_degree(degree); }
  int dim() const { return (k + 1) * (k + 2) / 2; }

  /// Degrees (a, b) of the m-th function P_a(xi) P_b(eta).
  static std::array<int, 2> degrees(int m);

  double value(int m, double xi, double eta) const {
    auto [a, b] = degrees(m);
    return legendre_scaled(a, xi) * legendre_scaled(b, eta);
  }
  double dxi(int m, double xi, double eta) const {
    auto [a, b] = degrees(m);
    return legendre_scaled_deriv(a, xi) * legendre_scaled(b, eta);
  }
  double deta(int m, double xi, double eta) const {
    auto [a, b] = degrees(m);
    return legendre_scaled(a, xi) * legendre_scaled_deriv(b, eta);
  }
  double norm2(int m) const {
    auto [a, b] = degrees(m);
    return legendre_scaled_norm2(a) * legendre_scaled_norm2(b);
  }
};

//------------------------------------------------------------------------------
// Quadrature
//------------------------------------------------------------------------------

/// Rule on the reference interval [-1/2, 1/2]; weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule (exact to degree 2n-1), 1 <= n <= 16.
const QuadratureRule& gauss_rule(int n);

/// Gauss-Lobatto interpolation points for degree k on [-1/2, 1/2]
/// (the midpoint when k = 0).
std::vector<double> lobatto_points(int k);

//------------------------------------------------------------------------------
// Fields
//------------------------------------------------------------------------------

using Function1D = std::function<double(double)>;
using Function2D = std::function<double(double, double)>;

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Piecewise P^k field on a Mesh1D; block j holds the coefficients of cell j.
class Field1D {
 public:
  Field1D(Mesh1D mesh, int k) : mesh_(mesh), basis_(k), coeffs_(mesh.size() * basis_.dim(), 0.0) {}

  const Mesh1D& mesh() const { return mesh_; }
  const Basis1D& basis() const { return basis_; }
  int degree() const { return basis_.k; }
  int dim() const { return basis_.dim(); }

  std::vector<double>& coeffs() { return coeffs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::span<double> cell(int j) { return {coeffs_.data() + j * dim(), static_cast<std::size_t>(dim())}; }
  std::span<const double> cell(int j) const {
    return {coeffs_.data() + j * dim(), static_cast<std::size_t>(dim())};
  }

  double time = 0.0;

  /// Cell-local polynomial of cell j at local coordinate xi.
  double eval_local(int j, double xi) const;
  /// Periodic wrap applied first; Side chooses the trace on an interface.
  double eval(double x, Side side = Side::Right) const;

 private:
  Mesh1D mesh_;
  Basis1D basis_;
  std::vector<double> coeffs_;
};

class Field2D {
 public:
  Field2D(Mesh2D mesh, int k) : mesh_(mesh), basis_(k), coeffs_(mesh.size() * basis_.dim(), 0.0) {}

  const Mesh2D& mesh() const { return mesh_; }
  const Basis2D& basis() const { return basis_; }
  int degree() const { return basis_.k; }
  int dim() const { return basis_.dim(); }

  std::vector<double>& coeffs() { return coeffs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::span<double> cell(int j) { return {coeffs_.data() + j * dim(), static_cast<std::size_t>(dim())}; }
  std::span<const double> cell(int j) const {
    return {coeffs_.data() + j * dim(), static_cast<std::size_t>(dim())};
  }

  double time = 0.0;

  double eval_local(int j, double xi, double eta) const;
  double eval(double x, double y, Side sx = Side::Right, Side sy = Side::Right) const;

 private:
  Mesh2D mesh_;
  Basis2D basis_;
  std::vector<double> coeffs_;
};

/// L2 projection onto V_h^k with (k+2)-point Gauss per direction.
Field1D project(const Function1D& f, const Mesh1D& mesh, int k);
Field2D project(const Function2D& f, const Mesh2D& mesh, int k);

/// L1, L2 and max-node errors against `exact`, (k+3)-point Gauss per direction.
ErrorNorms norms(const Field1D& u, const Function1D& exact);
ErrorNorms norms(const Field2D& u, const Function2D& exact);

/// Domain-averaged view of integral norms: L1 / |Omega|, L2 / sqrt(|Omega|),
/// max unchanged.
inline ErrorNorms domain_mean(ErrorNorms e, double measure) {
  return {e.l1 / measure, e.l2 / std::sqrt(measure), e.linf};
}

double l2_norm(const Field1D& u);
double l2_norm(const Field2D& u);

double total_mass(const Field1D& u);
double total_mass(const Field2D& u);

}  // namespace sldg
