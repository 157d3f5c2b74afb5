#include "sldg/ldg.hpp"

#include <stdexcept>

namespace sldg {

void FluxChoice::validate() const {
  if (u_hat == q_hat) throw std::invalid_argument("LDG fluxes must be alternating: u-hat and q-hat from opposite sides");
}

namespace {

// Integral over [-1/2, 1/2] of P_l(xi) P_m'(xi).
double stiffness_1d(int m, int l) {
  const auto& q = gauss_rule(3);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    s += q.weights[i] * legendre_scaled(l, q.nodes[i]) * legendre_scaled_deriv(m, q.nodes[i]);
  return s;
}

}  // namespace

LocalMatrices LocalMatrices::build(int k, double dx) {
  check_degree(k);
  const int n = k + 1;
  LocalMatrices lm;
  lm.k = k;
  lm.dx = dx;
  for (auto* mat : {&lm.M, &lm.C, &lm.D, &lm.E, &lm.F, &lm.N}) mat->assign(n * n, 0.0);
  for (int m = 0; m < n; ++m) {
    lm.M[m * n + m] = dx * legendre_scaled_norm2(m);
    for (int l = 0; l < n; ++l) {
      const double lp = legendre_scaled(l, 0.5), lm_ = legendre_scaled(l, -0.5);
      const double mp = legendre_scaled(m, 0.5), mm = legendre_scaled(m, -0.5);
      lm.C[m * n + l] = lp * mp;
      lm.D[m * n + l] = lp * mm;
      lm.E[m * n + l] = lm_ * mp;
      lm.F[m * n + l] = lm_ * mm;
      lm.N[m * n + l] = stiffness_1d(m, l);
    }
  }
  return lm;
}

double mass_dot(std::span<const double> mass, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += mass[i] * a[i] * b[i];
  return s;
}

namespace {

// Neighbor lookup along one direction; -1 outside under zero bc.
int neighbor_index(int j, int offset, int n, Boundary bc) {
  int t = j + offset;
  if (t >= 0 && t < n) return t;
  if (bc == Boundary::Zero) return -1;
  return (t + n) % n;
}

// Weak derivative operator (before the M^{-1} scaling) along one direction.
struct DirectionSpec {
  int n_cells, n_dir;
  std::function<int(int)> coord;         // cell -> index along the direction
  std::function<int(int, int)> with;     // (cell, new coordinate) -> cell
  std::function<double(int, int)> tangential;  // (m, l) -> transverse factor (0 when decoupled)
  std::function<int(int)> along_degree;  // basis function -> degree along the direction
};

BlockSparseMatrix weak_derivative(const DirectionSpec& d, int dim, Side side, Boundary bc) {
  BlockSparseBuilder b(d.n_cells, d.n_cells, dim);
  std::vector<double> self(dim * dim), right(dim * dim), left(dim * dim);
  for (int m = 0; m < dim; ++m)
    for (int l = 0; l < dim; ++l) {
      const double t = d.tangential(m, l);
      const int am = d.along_degree(m), al = d.along_degree(l);
      const double pm_hi = legendre_scaled(am, 0.5), pm_lo = legendre_scaled(am, -0.5);
      const double nvol = t * stiffness_1d(am, al);
      if (side == Side::Left) {
        self[m * dim + l] = t * legendre_scaled(al, 0.5) * pm_hi - nvol;
        left[m * dim + l] = -t * legendre_scaled(al, 0.5) * pm_lo;
        right[m * dim + l] = 0.0;
      } else {
        self[m * dim + l] = -t * legendre_scaled(al, -0.5) * pm_lo - nvol;
        right[m * dim + l] = t * legendre_scaled(al, -0.5) * pm_hi;
        left[m * dim + l] = 0.0;
      }
    }
  for (int j = 0; j < d.n_cells; ++j) {
    const int c = d.coord(j);
    b.add(j, j, self);
    const int lo = neighbor_index(c, -1, d.n_dir, bc), hi = neighbor_index(c, +1, d.n_dir, bc);
    if (side == Side::Left && lo >= 0) b.add(j, d.with(j, lo), left);
    if (side == Side::Right && hi >= 0) b.add(j, d.with(j, hi), right);
  }
  return b.build();
}

std::vector<double> inverse(const std::vector<double>& mass) {
  std::vector<double> inv(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) inv[i] = 1.0 / mass[i];
  return inv;
}

void finish(LdgOperator& op, const std::vector<BlockSparseMatrix>& weak_u, const std::vector<BlockSparseMatrix>& weak_q) {
  const auto minv = inverse(op.mass);
  BlockSparseMatrix lap;
  for (std::size_t d = 0; d < weak_u.size(); ++d) {
    op.gradient.push_back(weak_u[d].scale_rows(minv));
    BlockSparseMatrix term = weak_q[d].scale_rows(minv) * op.gradient.back();
    lap = d == 0 ? term : lap.plus(term);
  }
  op.laplacian = lap;
  op.weak = lap.scale_rows(op.mass);
}

}  // namespace

LdgOperator assemble_ldg_1d(const Mesh1D& mesh, int k, FluxChoice flux, Boundary bc) {
  flux.validate();
  Basis1D basis(k);
  const int dim = basis.dim(), n = mesh.size();
  LdgOperator op;
  op.dimension = 1;
  op.k = k;
  op.bc = bc;
  op.flux = {flux, flux};
  op.mass.resize(static_cast<std::size_t>(n) * dim);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < dim; ++m) op.mass[j * dim + m] = mesh.dx() * basis.norm2(m);

  // In 1D there is no transverse direction: every (m, l) pair couples.
  DirectionSpec d{n, n, [](int j) { return j; }, [](int, int c) { return c; }, [](int, int) { return 1.0; },
                  [](int m) { return m; }};
  finish(op, {weak_derivative(d, dim, flux.u_hat, bc)}, {weak_derivative(d, dim, flux.q_hat, bc)});
  return op;
}

LdgOperator assemble_ldg_2d(const Mesh2D& mesh, int k, FluxChoice flux_x, FluxChoice flux_y, Boundary bc) {
  flux_x.validate();
  flux_y.validate();
  Basis2D basis(k);
  const int dim = basis.dim();
  LdgOperator op;
  op.dimension = 2;
  op.k = k;
  op.bc = bc;
  op.flux = {flux_x, flux_y};
  op.mass.resize(static_cast<std::size_t>(mesh.size()) * dim);
  for (int j = 0; j < mesh.size(); ++j)
    for (int m = 0; m < dim; ++m) op.mass[j * dim + m] = mesh.cell_area() * basis.norm2(m);

  const double dx = mesh.dx(), dy = mesh.dy();
  DirectionSpec sx{mesh.size(), mesh.nx(), [&](int j) { return mesh.ix(j); },
                   [&](int j, int c) { return mesh.index(c, mesh.iy(j)); },
                   [dy](int m, int l) {
                     const int bm = Basis2D::degrees(m)[1], bl = Basis2D::degrees(l)[1];
                     return bm == bl ? dy * legendre_scaled_norm2(bm) : 0.0;
                   },
                   [](int m) { return Basis2D::degrees(m)[0]; }};
  DirectionSpec sy{mesh.size(), mesh.ny(), [&](int j) { return mesh.iy(j); },
                   [&](int j, int c) { return mesh.index(mesh.ix(j), c); },
                   [dx](int m, int l) {
                     const int am = Basis2D::degrees(m)[0], al = Basis2D::degrees(l)[0];
                     return am == al ? dx * legendre_scaled_norm2(am) : 0.0;
                   },
                   [](int m) { return Basis2D::degrees(m)[1]; }};
  finish(op, {weak_derivative(sx, dim, flux_x.u_hat, bc), weak_derivative(sy, dim, flux_y.u_hat, bc)},
         {weak_derivative(sx, dim, flux_x.q_hat, bc), weak_derivative(sy, dim, flux_y.q_hat, bc)});
  return op;
}

Dissipativity dissipativity_check(const LdgOperator& op, std::span<const double> u) {
  Dissipativity r;
  auto p = op.laplacian.apply(u);
  r.s = mass_dot(op.mass, p, u);
  for (const auto& g : op.gradient) {
    auto q = g.apply(u);
    r.q_norm2 += mass_dot(op.mass, q, q);
  }
  return r;
}

}  // namespace sldg
