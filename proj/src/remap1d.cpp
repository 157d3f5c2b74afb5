#include "sldg/remap1d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sldg {

namespace {

// Monomial coefficients (in s) of the Lagrange polynomial through nodes s[]
// that is one at node i.
std::array<double, 3> lagrange_coeffs(const std::vector<double>& s, std::size_t i) {
  std::array<double, 3> c{1.0, 0.0, 0.0};
  double denom = 1.0;
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (l == i) continue;
    // c(s) *= (s - s_l)
    c = {-s[l] * c[0], c[0] - s[l] * c[1], c[1] - s[l] * c[2]};
    denom *= s[i] - s[l];
  }
  for (double& v : c) v /= denom;
  return c;
}

}  // namespace

UpstreamInterval build_upstream_1d(const Mesh1D& mesh, int j, double t_end, double t_start, const VelocityField1D& v,
                                   int k, int substeps) {
  Basis1D basis(k);
  UpstreamInterval up;
  up.cell = j;
  up.k = k;
  up.t_end = t_end;
  up.t_start = t_start;

  auto traced = trace_interval_feet(mesh, j, t_end, t_start, v, k, substeps);
  for (const auto& tp : traced) up.feet.push_back(tp.foot);
  if (k == 0) {
    up.left = trace_back(mesh.left(j), t_end, t_start, v, substeps);
    up.right = trace_back(mesh.right(j), t_end, t_start, v, substeps);
  } else {
    up.left = up.feet.front();
    up.right = up.feet.back();
  }
  if (!(up.left < up.right))
    throw std::runtime_error("upstream interval of cell " + std::to_string(j) + " is degenerate or inverted");
  for (std::size_t i = 1; i < up.feet.size(); ++i)
    if (!(up.feet[i - 1] < up.feet[i]))
      throw std::runtime_error("characteristic feet of cell " + std::to_string(j) + " are not monotone");

  up.origin = 0.5 * (up.left + up.right);
  up.scale = mesh.dx();
  std::vector<double> s;
  for (double f : up.feet) s.push_back((f - up.origin) / up.scale);

  const auto xi_src = lobatto_points(k);
  up.coeffs.assign(basis.dim(), {0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto li = lagrange_coeffs(s, i);
    for (int m = 0; m < basis.dim(); ++m) {
      double val = basis.value(m, xi_src[i]);
      for (int p = 0; p < 3; ++p) up.coeffs[m][p] += val * li[p];
    }
  }
  return up;
}

std::vector<SubInterval> split_subintervals(const UpstreamInterval& up, const Mesh1D& mesh, Boundary bc) {
  const double dx = mesh.dx();
  if (up.right - up.left > mesh.length() * (1.0 + 1e-12))
    throw std::runtime_error("upstream interval longer than the domain (CFL too large for the mesh)");
  const double snap = 1e-12 * dx;

  auto snapped = [&](double x) {
    double g = mesh.xa() + std::nearbyint((x - mesh.xa()) / dx) * dx;
    return std::abs(x - g) <= snap ? g : x;
  };
  const double a = snapped(up.left), b = snapped(up.right);

  std::vector<double> cuts{a};
  long first = static_cast<long>(std::floor((a - mesh.xa()) / dx)) + 1;
  for (long i = first;; ++i) {
    double g = mesh.xa() + static_cast<double>(i) * dx;
    if (g >= b - snap) break;
    if (g > a + snap) cuts.push_back(g);
  }
  cuts.push_back(b);

  std::vector<SubInterval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= snap) continue;
    long ju = static_cast<long>(std::floor((0.5 * (lo + hi) - mesh.xa()) / dx));
    int jw = mesh.wrap(ju);
    SubInterval piece{lo, hi, jw, static_cast<double>(jw - ju) * dx};
    if (bc == Boundary::Zero && (ju < 0 || ju >= mesh.size())) piece.cell = -1;
    out.push_back(piece);
  }
  return out;
}

void remap_term1_1d(const Field1D& u, const UpstreamInterval& up, std::span<const SubInterval> pieces,
                    std::span<double> loads) {
  const auto& mesh = u.mesh();
  const auto& q = gauss_rule(up.k + 1);
  const int dim = up.k + 1;
  std::fill(loads.begin(), loads.end(), 0.0);
  for (const auto& pc : pieces) {
    if (pc.cell < 0) continue;
    const double len = pc.b - pc.a;
    const double xc = mesh.center(pc.cell);
    for (std::size_t i = 0; i < q.size(); ++i) {
      double x = pc.a + (q.nodes[i] + 0.5) * len;
      double uv = u.eval_local(pc.cell, (x + pc.shift - xc) / mesh.dx());
      double w = q.weights[i] * len * uv;
      for (int m = 0; m < dim; ++m) loads[m] += w * up.eval_test(m, x);
    }
  }
}

std::vector<double> remap_term1_1d(const Field1D& u, const UpstreamInterval& up, Boundary bc) {
  if (u.degree() != up.k) throw std::invalid_argument("remap_term1_1d: field and upstream degree differ");
  std::vector<double> loads(up.k + 1);
  auto pieces = split_subintervals(up, u.mesh(), bc);
  remap_term1_1d(u, up, pieces, loads);
  return loads;
}

}  // namespace sldg
