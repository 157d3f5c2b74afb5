#include "sldg/timeint.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "sldg/remap_ops.hpp"

namespace sldg {

void ButcherTableau::validate(double tol) const {
  const int s = stages();
  if (s < 1 || static_cast<int>(A.size()) != s || static_cast<int>(c.size()) != s)
    throw std::invalid_argument("tableau " + name + ": inconsistent sizes");
  for (int i = 0; i < s; ++i) {
    if (static_cast<int>(A[i].size()) != s) throw std::invalid_argument("tableau " + name + ": A is not square");
    double row = 0.0;
    for (int j = 0; j < s; ++j) {
      if (j > i && A[i][j] != 0.0) throw std::invalid_argument("tableau " + name + ": A is not lower triangular");
      row += A[i][j];
    }
    if (A[i][i] == 0.0) throw std::invalid_argument("tableau " + name + ": zero diagonal entry");
    if (std::abs(row - c[i]) > tol) throw std::invalid_argument("tableau " + name + ": row sum differs from c");
  }
  for (int j = 0; j < s; ++j)
    if (std::abs(A[s - 1][j] - b[j]) > tol)
      throw std::invalid_argument("tableau " + name + ": not stiffly accurate");
}

namespace tableau {

ButcherTableau backward_euler() { return {"be", {{1.0}}, {1.0}, {1.0}}; }

ButcherTableau dirk2() {
  const double nu = 1.0 - std::sqrt(2.0) / 2.0;
  return {"dirk2", {{nu, 0.0}, {1.0 - nu, nu}}, {1.0 - nu, nu}, {nu, 1.0}};
}

ButcherTableau dirk3() {
  const double g = 0.435866521508459;
  const double b1 = -1.5 * g * g + 4.0 * g - 0.25;
  const double b2 = 1.5 * g * g - 5.0 * g + 1.25;
  return {"dirk3",
          {{g, 0.0, 0.0}, {(1.0 - g) / 2.0, g, 0.0}, {b1, b2, g}},
          {b1, b2, g},
          {g, (1.0 + g) / 2.0, 1.0}};
}

ButcherTableau dirk4() {
  std::vector<std::vector<double>> a{{1.0 / 4, 0, 0, 0, 0},
                                     {1.0 / 2, 1.0 / 4, 0, 0, 0},
                                     {17.0 / 50, -1.0 / 25, 1.0 / 4, 0, 0},
                                     {371.0 / 1360, -137.0 / 2720, 15.0 / 544, 1.0 / 4, 0},
                                     {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 1.0 / 4}};
  return {"dirk4", a, a.back(), {1.0 / 4, 3.0 / 4, 11.0 / 20, 1.0 / 2, 1.0}};
}

ButcherTableau by_name(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (n == "be" || n == "backward_euler") return backward_euler();
  if (n == "dirk2") return dirk2();
  if (n == "dirk3") return dirk3();
  if (n == "dirk4") return dirk4();
  throw std::invalid_argument("unknown tableau '" + std::string(name) + "'");
}

}  // namespace tableau

double cfl_to_dt(double cfl, const Mesh1D& mesh, const VelocityField1D& v) {
  if (!(cfl > 0.0)) throw std::invalid_argument("CFL must be positive");
  if (v.max_speed <= 0.0) throw std::invalid_argument("cfl_to_dt: velocity bound must be positive");
  return cfl * mesh.dx() / v.max_speed;
}

double cfl_to_dt(double cfl, const Mesh2D& mesh, const VelocityField2D& v) {
  if (!(cfl > 0.0)) throw std::invalid_argument("CFL must be positive");
  const double rate = v.max_a / mesh.dx() + v.max_b / mesh.dy();
  if (rate <= 0.0) throw std::invalid_argument("cfl_to_dt: velocity bound must be positive");
  return cfl / rate;
}

//------------------------------------------------------------------------------

StageSystem::StageSystem(const LdgOperator& op, double alpha, LinearSolverConfig cfg)
    : alpha_(alpha), cfg_(cfg), mass_(op.mass) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (alpha != 0.0) {
    // B = M - alpha * (M D)
    BlockSparseBuilder diag(op.weak.block_rows(), op.weak.block_cols(), op.weak.block_size());
    const int bs = op.weak.block_size();
    std::vector<double> blk(bs * bs);
    for (int j = 0; j < op.weak.block_rows(); ++j) {
      std::fill(blk.begin(), blk.end(), 0.0);
      for (int m = 0; m < bs; ++m) blk[m * bs + m] = mass_[j * bs + m];
      diag.add(j, j, blk);
    }
    b_ = diag.build().plus(op.weak, -alpha);
    if (cfg_.method == LinearSolverConfig::Method::Direct) direct_ = std::make_shared<DirectSolver>(b_);
  }
}

SolveReport StageSystem::solve(std::span<const double> rhs, std::span<double> x) const {
  SolveReport rep;
  if (alpha_ == 0.0) {
    for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = rhs[i] / mass_[i];
    rep.converged = true;
    return rep;
  }
  if (direct_) {
    direct_->solve(rhs, x);
    std::vector<double> r = b_.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
    rep.residual = kernels::nrm2(r);
    rep.converged = true;
    return rep;
  }
  for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = rhs[i] / mass_[i];
  auto apply_b = [this](std::span<const double> in, std::span<double> out) { b_.apply(in, out); };
  auto precond = [this](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] / mass_[i];
  };
  rep = gmres(apply_b, precond, rhs, x, cfg_);
  if (!rep.converged)
    throw SolverError("GMRES did not converge: residual " + std::to_string(rep.residual) + " after " +
                          std::to_string(rep.iterations) + " iterations",
                      rep);
  return rep;
}

SolveReport solve_stage(const StageSystem& system, std::span<const double> rhs, std::span<double> x) {
  return system.solve(rhs, x);
}

//------------------------------------------------------------------------------

namespace {

BlockSparseMatrix mass_matrix(int cells, int dim, const std::vector<double>& norm2, double measure) {
  BlockSparseBuilder b(cells, cells, dim);
  std::vector<double> blk(dim * dim, 0.0);
  for (int m = 0; m < dim; ++m) blk[m * dim + m] = measure * norm2[m];
  for (int j = 0; j < cells; ++j) b.add(j, j, blk);
  return b.build();
}

}  // namespace

RemapCache1D::RemapCache1D(Mesh1D mesh, int k, VelocityField1D v, Boundary bc, double density)
    : mesh_(mesh), k_(k), v_(std::move(v)), bc_(bc), density_(density) {}

void RemapCache1D::begin_step() {
  if (!v_.autonomous) cache_.clear();
}

const BlockSparseMatrix& RemapCache1D::matrix(double t_end, double t_start) {
  const auto key = v_.autonomous ? std::make_pair(t_end - t_start, 0.0) : std::make_pair(t_end, t_start);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  BlockSparseMatrix r;
  if (t_end == t_start) {
    Basis1D basis(k_);
    std::vector<double> n2;
    for (int m = 0; m < basis.dim(); ++m) n2.push_back(basis.norm2(m));
    r = mass_matrix(mesh_.size(), basis.dim(), n2, mesh_.dx());
  } else {
    const int sub = substeps_for(t_end - t_start, v_.max_speed / mesh_.dx(), density_);
    r = remap_matrix_1d(mesh_, k_, t_end, t_start, v_, sub, bc_);
  }
  return cache_.emplace(key, std::move(r)).first->second;
}

RemapCache2D::RemapCache2D(Mesh2D mesh, int k, VelocityField2D v, RemapMode mode, Boundary bc, double density)
    : mesh_(mesh), k_(k), v_(std::move(v)), mode_(mode), bc_(bc), density_(density) {}

void RemapCache2D::begin_step() {
  if (!v_.autonomous) cache_.clear();
}

const BlockSparseMatrix& RemapCache2D::matrix(double t_end, double t_start) {
  const auto key = v_.autonomous ? std::make_pair(t_end - t_start, 0.0) : std::make_pair(t_end, t_start);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  BlockSparseMatrix r;
  if (t_end == t_start) {
    Basis2D basis(k_);
    std::vector<double> n2;
    for (int m = 0; m < basis.dim(); ++m) n2.push_back(basis.norm2(m));
    r = mass_matrix(mesh_.size(), basis.dim(), n2, mesh_.cell_area());
  } else {
    const double rate = std::max(v_.max_a / mesh_.dx(), v_.max_b / mesh_.dy());
    const int sub = substeps_for(t_end - t_start, rate, density_);
    r = remap_matrix_2d(mesh_, k_, t_end, t_start, v_, mode_, sub, bc_);
  }
  return cache_.emplace(key, std::move(r)).first->second;
}

//------------------------------------------------------------------------------

DirkStepper::DirkStepper(ButcherTableau tableau, double eps, const LdgOperator& ldg, RemapProvider& remap,
                         LinearSolverConfig solver, SourceProjector source)
    : tab_(std::move(tableau)), eps_(eps), ldg_(ldg), remap_(remap), solver_(solver), source_(std::move(source)) {
  tab_.validate();
  if (eps < 0.0) throw std::invalid_argument("diffusion coefficient must be non-negative");
}

const StageSystem& DirkStepper::system_for(double alpha) {
  auto it = systems_.find(alpha);
  if (it == systems_.end()) it = systems_.emplace(alpha, StageSystem(ldg_, alpha, solver_)).first;
  return it->second;
}

void DirkStepper::step(std::vector<double>& u, double t, double dt) {
  const int s = tab_.stages();
  const std::size_t n = u.size();
  remap_.begin_step();
  // Per stage: the field eps p + g whose remaps feed later stages.
  std::vector<std::vector<double>> forcing(s);
  std::vector<double> rhs(n), x(n), tmp(n);
  for (int ii = 0; ii < s; ++ii) {
    const double t_ii = t + tab_.c[ii] * dt;
    remap_.matrix(t_ii, t).apply(u, rhs);
    for (int jj = 0; jj < ii; ++jj) {
      const double a = tab_.A[ii][jj];
      if (a == 0.0 || forcing[jj].empty()) continue;
      const double t_jj = t + tab_.c[jj] * dt;
      for (std::size_t i = 0; i < n; ++i) tmp[i] = a * dt * forcing[jj][i];
      const auto loads = remap_.matrix(t_ii, t_jj).apply(tmp);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += loads[i];
    }
    std::vector<double> g;
    if (source_) {
      g = source_(t_ii);
      const double w = tab_.A[ii][ii] * dt;
      for (std::size_t i = 0; i < n; ++i) rhs[i] += w * ldg_.mass[i] * g[i];
    }
    const auto& sys = system_for(tab_.A[ii][ii] * dt * eps_);
    const auto rep = sys.solve(rhs, x);
    stats_.iterations += rep.iterations;
    stats_.max_residual = std::max(stats_.max_residual, rep.residual);
    if (ii + 1 < s) {
      if (eps_ != 0.0 || source_) {
        std::vector<double> f(n, 0.0);
        if (eps_ != 0.0) {
          const auto p = ldg_.laplacian.apply(x);
          for (std::size_t i = 0; i < n; ++i) f[i] = eps_ * p[i];
        }
        if (source_)
          for (std::size_t i = 0; i < n; ++i) f[i] += g[i];
        forcing[ii] = std::move(f);
      }
    }
    if (ii + 1 == s) u = x;
  }
  ++stats_.steps;
}

}  // namespace sldg
