#include "sldg/poly2.hpp"

#include <stdexcept>

#include "sldg/core.hpp"

namespace sldg {

double Poly2::operator()(double s, double t) const {
  double v = 0.0;
  for (int a = kMaxDeg; a >= 0; --a) {
    double row = 0.0;
    for (int b = kMaxDeg; b >= 0; --b) row = row * t + c[a][b];
    v = v * s + row;
  }
  return v;
}

int Poly2::degree() const {
  int d = -1;
  for (int a = 0; a <= kMaxDeg; ++a)
    for (int b = 0; b <= kMaxDeg; ++b)
      if (c[a][b] != 0.0 && a + b > d) d = a + b;
  return d;
}

Poly2 Poly2::translated(double ds, double dt) const {
  static constexpr std::array<std::array<double, 5>, 5> binom{
      {{1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}}};
  std::array<double, 5> pds{1, ds, ds * ds, ds * ds * ds, ds * ds * ds * ds};
  std::array<double, 5> pdt{1, dt, dt * dt, dt * dt * dt, dt * dt * dt * dt};
  Poly2 out;
  for (int a = 0; a <= kMaxDeg; ++a)
    for (int b = 0; b <= kMaxDeg; ++b) {
      double v = c[a][b];
      if (v == 0.0) continue;
      // (s+ds)^a (t+dt)^b
      for (int i = 0; i <= a; ++i)
        for (int l = 0; l <= b; ++l) out.c[i][l] += v * binom[a][i] * pds[a - i] * binom[b][l] * pdt[b - l];
    }
  return out;
}

Poly2 operator*(const Poly2& p, const Poly2& q) {
  Poly2 out;
  for (int a = 0; a <= Poly2::kMaxDeg; ++a)
    for (int b = 0; b <= Poly2::kMaxDeg; ++b) {
      if (p.c[a][b] == 0.0) continue;
      for (int i = 0; i <= Poly2::kMaxDeg; ++i)
        for (int l = 0; l <= Poly2::kMaxDeg; ++l) {
          if (q.c[i][l] == 0.0) continue;
          if (a + i > Poly2::kMaxDeg || b + l > Poly2::kMaxDeg)
            throw std::overflow_error("Poly2 product exceeds the supported degree");
          out.c[a + i][b + l] += p.c[a][b] * q.c[i][l];
        }
    }
  return out;
}

Poly2& Poly2::operator+=(const Poly2& q) {
  for (int a = 0; a <= kMaxDeg; ++a)
    for (int b = 0; b <= kMaxDeg; ++b) c[a][b] += q.c[a][b];
  return *this;
}

Poly2 operator*(double a, Poly2 p) {
  for (auto& row : p.c)
    for (double& v : row) v *= a;
  return p;
}

Poly2 basis_poly(int m) {
  auto [a, b] = Basis2D::degrees(m);
  auto leg = [](int d) {
    std::array<double, 3> c{0, 0, 0};
    if (d == 0) c[0] = 1.0;
    if (d == 1) c[1] = 1.0;
    if (d == 2) c = {-1.0 / 12.0, 0.0, 1.0};
    return c;
  };
  auto pa = leg(a), pb = leg(b);
  Poly2 out;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) out.c[i][l] = pa[i] * pb[l];
  return out;
}

}  // namespace sldg
