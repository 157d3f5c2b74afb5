#pragma once

// DIRK stepping along characteristics: stage remaps of u^n and of earlier
// stage diffusion/source terms, then one implicit solve per stage.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sldg/characteristics.hpp"
#include "sldg/ldg.hpp"
#include "sldg/linalg.hpp"
#include "sldg/remap2d.hpp"

namespace sldg {

struct ButcherTableau {
  std::string name;
  std::vector<std::vector<double>> A;  // s x s, lower triangular
  std::vector<double> b;
  std::vector<double> c;

  int stages() const { return static_cast<int>(b.size()); }
  /// Throws std::invalid_argument unless lower triangular, a_ii != 0, stiffly
  /// accurate and row sums equal to c (all to `tol`).
  void validate(double tol = 1e-14) const;
};

namespace tableau {
ButcherTableau backward_euler();
ButcherTableau dirk2();
ButcherTableau dirk3();
ButcherTableau dirk4();
/// "be", "dirk2", "dirk3" or "dirk4" (case-insensitive).
ButcherTableau by_name(std::string_view name);
}  // namespace tableau

double cfl_to_dt(double cfl, const Mesh1D& mesh, const VelocityField1D& v);
double cfl_to_dt(double cfl, const Mesh2D& mesh, const VelocityField2D& v);

/// B = M - alpha * (M D_Delta) with its solver state.
class StageSystem {
 public:
  StageSystem(const LdgOperator& op, double alpha, LinearSolverConfig cfg);

  double alpha() const { return alpha_; }
  const BlockSparseMatrix& matrix() const { return b_; }
  /// Solves B x = rhs; x is overwritten. Throws SolverError when GMRES stops
  /// above tolerance.
  SolveReport solve(std::span<const double> rhs, std::span<double> x) const;

 private:
  double alpha_;
  LinearSolverConfig cfg_;
  std::vector<double> mass_;
  BlockSparseMatrix b_;
  std::shared_ptr<DirectSolver> direct_;
};

SolveReport solve_stage(const StageSystem& system, std::span<const double> rhs, std::span<double> x);

/// Remap weight matrices R(t_end, t_start) with loads = R u. Matrices for
/// autonomous fields depend only on the duration and are kept across steps.
class RemapProvider {
 public:
  virtual ~RemapProvider() = default;
  virtual const BlockSparseMatrix& matrix(double t_end, double t_start) = 0;
  /// Called at the start of every step.
  virtual void begin_step() {}
};

class RemapCache1D : public RemapProvider {
 public:
  RemapCache1D(Mesh1D mesh, int k, VelocityField1D v, Boundary bc = Boundary::Periodic, double density = 4.0);
  const BlockSparseMatrix& matrix(double t_end, double t_start) override;
  void begin_step() override;

 private:
  Mesh1D mesh_;
  int k_;
  VelocityField1D v_;
  Boundary bc_;
  double density_;
  std::map<std::pair<double, double>, BlockSparseMatrix> cache_;
};

class RemapCache2D : public RemapProvider {
 public:
  RemapCache2D(Mesh2D mesh, int k, VelocityField2D v, RemapMode mode, Boundary bc = Boundary::Periodic,
               double density = 4.0);
  const BlockSparseMatrix& matrix(double t_end, double t_start) override;
  void begin_step() override;

 private:
  Mesh2D mesh_;
  int k_;
  VelocityField2D v_;
  RemapMode mode_;
  Boundary bc_;
  double density_;
  std::map<std::pair<double, double>, BlockSparseMatrix> cache_;
};

/// Projected source coefficients at time t; empty function for g = 0.
using SourceProjector = std::function<std::vector<double>(double t)>;

struct StepStats {
  int steps = 0;
  long iterations = 0;
  double max_residual = 0.0;
};

class DirkStepper {
 public:
  DirkStepper(ButcherTableau tableau, double eps, const LdgOperator& ldg, RemapProvider& remap,
              LinearSolverConfig solver, SourceProjector source = {});

  /// Advances coefficients u from t to t + dt.
  void step(std::vector<double>& u, double t, double dt);
  const StepStats& stats() const { return stats_; }

 private:
  const StageSystem& system_for(double alpha);

  ButcherTableau tab_;
  double eps_;
  const LdgOperator& ldg_;
  RemapProvider& remap_;
  LinearSolverConfig solver_;
  SourceProjector source_;
  std::map<double, StageSystem> systems_;
  StepStats stats_;
};

}  // namespace sldg
