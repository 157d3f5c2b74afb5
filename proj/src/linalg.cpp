#include "sldg/linalg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace sldg {

BlockSparseBuilder::BlockSparseBuilder(int block_rows, int block_cols, int bs)
    : rows_(block_rows), cols_(block_cols), bs_(bs), blocks_(block_rows) {}

void BlockSparseBuilder::add(int row, int col, std::span<const double> block, double scale) {
  auto& dst = blocks_.at(row)[col];
  if (dst.empty()) dst.assign(bs_ * bs_, 0.0);
  for (int i = 0; i < bs_ * bs_; ++i) dst[i] += scale * block[i];
}

BlockSparseMatrix BlockSparseBuilder::build() const {
  BlockSparseMatrix m;
  m.block_rows_ = rows_;
  m.block_cols_ = cols_;
  m.bs_ = bs_;
  m.brow_ptr_.assign(1, 0);
  for (const auto& row : blocks_) {
    for (const auto& [c, blk] : row) {
      m.bcols_.push_back(c);
      m.bvals_.insert(m.bvals_.end(), blk.begin(), blk.end());
    }
    m.brow_ptr_.push_back(static_cast<int>(m.bcols_.size()));
  }
  m.finalize_csr();
  return m;
}

void BlockSparseMatrix::finalize_csr() {
  const int bs2 = bs_ * bs_;
  csr_ptr_.assign(1, 0);
  csr_cols_.clear();
  csr_vals_.clear();
  for (int r = 0; r < block_rows_; ++r) {
    for (int i = 0; i < bs_; ++i) {
      for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p) {
        for (int jj = 0; jj < bs_; ++jj) {
          csr_cols_.push_back(bcols_[p] * bs_ + jj);
          csr_vals_.push_back(bvals_[static_cast<std::size_t>(p) * bs2 + i * bs_ + jj]);
        }
      }
      csr_ptr_.push_back(static_cast<std::int32_t>(csr_cols_.size()));
    }
  }
}

std::span<const double> BlockSparseMatrix::block(int r, int c) const {
  auto cols = block_cols_of(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return {};
  std::size_t p = static_cast<std::size_t>(brow_ptr_[r] + (it - cols.begin()));
  return {bvals_.data() + p * bs_ * bs_, static_cast<std::size_t>(bs_ * bs_)};
}

void BlockSparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  kernels::csr_matvec(csr(), x, y);
}

std::vector<double> BlockSparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows());
  apply(x, y);
  return y;
}

BlockSparseMatrix BlockSparseMatrix::operator*(const BlockSparseMatrix& rhs) const {
  if (block_cols_ != rhs.block_rows_ || bs_ != rhs.bs_) throw std::invalid_argument("block matrix shape mismatch");
  BlockSparseBuilder b(block_rows_, rhs.block_cols_, bs_);
  std::vector<double> prod(bs_ * bs_);
  for (int r = 0; r < block_rows_; ++r) {
    for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p) {
      const double* a = bvals_.data() + static_cast<std::size_t>(p) * bs_ * bs_;
      int mid = bcols_[p];
      for (int q = rhs.brow_ptr_[mid]; q < rhs.brow_ptr_[mid + 1]; ++q) {
        const double* c = rhs.bvals_.data() + static_cast<std::size_t>(q) * bs_ * bs_;
        std::fill(prod.begin(), prod.end(), 0.0);
        for (int i = 0; i < bs_; ++i)
          for (int l = 0; l < bs_; ++l)
            for (int jj = 0; jj < bs_; ++jj) prod[i * bs_ + jj] += a[i * bs_ + l] * c[l * bs_ + jj];
        b.add(r, rhs.bcols_[q], prod);
      }
    }
  }
  return b.build();
}

BlockSparseMatrix BlockSparseMatrix::plus(const BlockSparseMatrix& rhs, double alpha) const {
  if (block_rows_ != rhs.block_rows_ || block_cols_ != rhs.block_cols_ || bs_ != rhs.bs_)
    throw std::invalid_argument("block matrix shape mismatch");
  BlockSparseBuilder b(block_rows_, block_cols_, bs_);
  const std::size_t bs2 = static_cast<std::size_t>(bs_) * bs_;
  for (int r = 0; r < block_rows_; ++r) {
    for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p)
      b.add(r, bcols_[p], {bvals_.data() + p * bs2, bs2});
    for (int p = rhs.brow_ptr_[r]; p < rhs.brow_ptr_[r + 1]; ++p)
      b.add(r, rhs.bcols_[p], {rhs.bvals_.data() + p * bs2, bs2}, alpha);
  }
  return b.build();
}

BlockSparseMatrix BlockSparseMatrix::transpose() const {
  BlockSparseBuilder b(block_cols_, block_rows_, bs_);
  const std::size_t bs2 = static_cast<std::size_t>(bs_) * bs_;
  std::vector<double> t(bs2);
  for (int r = 0; r < block_rows_; ++r) {
    for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p) {
      const double* a = bvals_.data() + p * bs2;
      for (int i = 0; i < bs_; ++i)
        for (int jj = 0; jj < bs_; ++jj) t[jj * bs_ + i] = a[i * bs_ + jj];
      b.add(bcols_[p], r, t);
    }
  }
  return b.build();
}

BlockSparseMatrix BlockSparseMatrix::scale_rows(std::span<const double> d) const {
  BlockSparseMatrix m = *this;
  const std::size_t bs2 = static_cast<std::size_t>(bs_) * bs_;
  for (int r = 0; r < block_rows_; ++r)
    for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p)
      for (int i = 0; i < bs_; ++i)
        for (int jj = 0; jj < bs_; ++jj) m.bvals_[p * bs2 + i * bs_ + jj] *= d[r * bs_ + i];
  m.finalize_csr();
  return m;
}

BlockSparseMatrix BlockSparseMatrix::identity_minus(double alpha) const {
  if (block_rows_ != block_cols_) throw std::invalid_argument("identity_minus needs a square matrix");
  BlockSparseBuilder b(block_rows_, block_cols_, bs_);
  std::vector<double> eye(bs_ * bs_, 0.0);
  for (int i = 0; i < bs_; ++i) eye[i * bs_ + i] = 1.0;
  const std::size_t bs2 = static_cast<std::size_t>(bs_) * bs_;
  for (int r = 0; r < block_rows_; ++r) {
    b.add(r, r, eye);
    for (int p = brow_ptr_[r]; p < brow_ptr_[r + 1]; ++p)
      b.add(r, bcols_[p], {bvals_.data() + p * bs2, bs2}, -alpha);
  }
  return b.build();
}

double BlockSparseMatrix::max_abs_diff(const BlockSparseMatrix& rhs) const { return plus(rhs, -1.0).max_abs(); }

double BlockSparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : bvals_) m = std::max(m, std::abs(v));
  return m;
}

//------------------------------------------------------------------------------

SolveReport gmres(const LinearOperator& b_op, const LinearOperator& precond, std::span<const double> rhs,
                  std::span<double> x, const LinearSolverConfig& cfg) {
  const std::size_t n = rhs.size();
  const int m = std::max(1, cfg.restart);
  const double target = cfg.tol * std::max(1.0, kernels::nrm2(rhs));

  std::vector<double> r(n), w(n), z(n);
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<double> h((m + 1) * m), cs(m), sn(m), g(m + 1), y(m);
  auto H = [&](int i, int j) -> double& { return h[i * m + j]; };

  auto true_residual = [&] {
    b_op(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    return kernels::nrm2(r);
  };

  SolveReport rep;
  double beta = true_residual();
  rep.residual = beta;
  if (beta <= target) {
    rep.converged = true;
    return rep;
  }

  while (rep.iterations < cfg.max_iterations) {
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < m && rep.iterations < cfg.max_iterations; ++j) {
      ++rep.iterations;
      precond(v[j], z);
      b_op(z, w);
      // Modified Gram-Schmidt.
      for (int i = 0; i <= j; ++i) {
        H(i, j) = kernels::dot(w, v[i]);
        kernels::axpy(-H(i, j), v[i], w);
      }
      H(j + 1, j) = kernels::nrm2(w);
      if (H(j + 1, j) > 0.0)
        for (std::size_t i = 0; i < n; ++i) v[j + 1][i] = w[i] / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      double d = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = d > 0.0 ? H(j, j) / d : 1.0;
      sn[j] = d > 0.0 ? H(j + 1, j) / d : 0.0;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= target) {
        ++j;
        break;
      }
    }
    // Back substitution and update x += P V y.
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int l = i + 1; l < j; ++l) s -= H(i, l) * y[l];
      y[i] = s / H(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < j; ++i) kernels::axpy(y[i], v[i], w);
    precond(w, z);
    kernels::axpy(1.0, z, x);

    beta = true_residual();
    rep.residual = beta;
    if (beta <= target) {
      rep.converged = true;
      return rep;
    }
  }
  return rep;
}

//------------------------------------------------------------------------------

struct DirectSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

DirectSolver::DirectSolver(const BlockSparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  std::vector<Eigen::Triplet<double>> trips;
  auto csr = a.csr();
  for (int r = 0; r < csr.rows; ++r)
    for (auto p = csr.row_ptr[r]; p < csr.row_ptr[r + 1]; ++p) trips.emplace_back(r, csr.cols[p], csr.vals[p]);
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  impl_->lu.compute(m);
  if (impl_->lu.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

void DirectSolver::solve(std::span<const double> rhs, std::span<double> x) const {
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  Eigen::VectorXd sol = impl_->lu.solve(b);
  std::copy(sol.data(), sol.data() + sol.size(), x.begin());
}

}  // namespace sldg
