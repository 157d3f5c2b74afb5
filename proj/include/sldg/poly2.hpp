#pragma once

#include <array>

namespace sldg {

/// Bivariate polynomial sum c[a][b] s^a t^b with a, b <= 4 (products of two
/// P^2 polynomials fit).
struct Poly2 {
  static constexpr int kMaxDeg = 4;
  std::array<std::array<double, kMaxDeg + 1>, kMaxDeg + 1> c{};

  double operator()(double s, double t) const;
  int degree() const;

  /// p(s + ds, t + dt) expanded in monomials of (s, t).
  Poly2 translated(double ds, double dt) const;

  friend Poly2 operator*(const Poly2& p, const Poly2& q);
  Poly2& operator+=(const Poly2& q);
  friend Poly2 operator*(double a, Poly2 p);
};

/// Monomial form of the 2D scaled-Legendre basis function m.
Poly2 basis_poly(int m);

}  // namespace sldg
