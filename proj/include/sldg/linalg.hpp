#pragma once

// Block-sparse matrices with dense square blocks and the Krylov / direct
// solvers for the implicit stage systems.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sldg/kernels.hpp"

namespace sldg {

class BlockSparseMatrix;

/// Accumulates dense bs x bs blocks (row-major) at block positions.
class BlockSparseBuilder {
 public:
  BlockSparseBuilder(int block_rows, int block_cols, int bs);

  void add(int row, int col, std::span<const double> block, double scale = 1.0);
  BlockSparseMatrix build() const;

 private:
  int rows_, cols_, bs_;
  std::vector<std::map<int, std::vector<double>>> blocks_;
};

class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;

  int block_rows() const { return block_rows_; }
  int block_cols() const { return block_cols_; }
  int block_size() const { return bs_; }
  int rows() const { return block_rows_ * bs_; }
  int cols() const { return block_cols_ * bs_; }

  /// Column indices of the stored blocks in block row r, ascending.
  std::span<const int> block_cols_of(int r) const {
    return {bcols_.data() + brow_ptr_[r], static_cast<std::size_t>(brow_ptr_[r + 1] - brow_ptr_[r])};
  }
  /// Dense block at (r, c) or an empty span when not stored.
  std::span<const double> block(int r, int c) const;

  /// y = A x through the dispatching CSR kernel.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  BlockSparseMatrix operator*(const BlockSparseMatrix& rhs) const;
  /// this + alpha * rhs
  BlockSparseMatrix plus(const BlockSparseMatrix& rhs, double alpha = 1.0) const;
  BlockSparseMatrix transpose() const;
  /// diag(d) * A, with d one entry per scalar row.
  BlockSparseMatrix scale_rows(std::span<const double> d) const;
  /// I - alpha * A (square only).
  BlockSparseMatrix identity_minus(double alpha) const;

  double max_abs_diff(const BlockSparseMatrix& rhs) const;
  double max_abs() const;

  kernels::CsrView csr() const { return {rows(), csr_ptr_, csr_cols_, csr_vals_}; }

 private:
  friend class BlockSparseBuilder;
  void finalize_csr();

  int block_rows_ = 0, block_cols_ = 0, bs_ = 1;
  std::vector<int> brow_ptr_{0};
  std::vector<int> bcols_;
  std::vector<double> bvals_;  // bs*bs per stored block, row-major

  std::vector<std::int32_t> csr_ptr_{0};
  std::vector<std::int32_t> csr_cols_;
  std::vector<double> csr_vals_;
};

//------------------------------------------------------------------------------

struct LinearSolverConfig {
  enum class Method { Gmres, Direct };
  Method method = Method::Gmres;
  /// Relative tolerance: ||B x - b|| <= tol * max(1, ||b||).
  double tol = 1e-12;
  int restart = 40;
  int max_iterations = 5000;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // true residual ||B x - b||_2
  bool converged = false;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Restarted GMRES on B x = b with right preconditioner P (x = P y), so the
/// Arnoldi residual is the true residual of B. `x` holds the initial guess on
/// entry. Returns without throwing; callers decide what non-convergence means.
SolveReport gmres(const LinearOperator& b_op, const LinearOperator& precond, std::span<const double> rhs,
                  std::span<double> x, const LinearSolverConfig& cfg);

/// Sparse LU (Eigen) factorization of a block-sparse matrix.
class DirectSolver {
 public:
  explicit DirectSolver(const BlockSparseMatrix& a);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  void solve(std::span<const double> rhs, std::span<double> x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport report) : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

}  // namespace sldg
