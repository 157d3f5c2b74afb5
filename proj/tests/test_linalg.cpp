#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sldg/linalg.hpp"

using namespace sldg;

namespace {

// Dense row-major copy for oracle products.
std::vector<double> dense(const BlockSparseMatrix& a) {
  std::vector<double> d(static_cast<std::size_t>(a.rows()) * a.cols(), 0.0);
  const int bs = a.block_size();
  for (int r = 0; r < a.block_rows(); ++r)
    for (int c : a.block_cols_of(r)) {
      auto blk = a.block(r, c);
      for (int i = 0; i < bs; ++i)
        for (int j = 0; j < bs; ++j) d[(r * bs + i) * a.cols() + c * bs + j] = blk[i * bs + j];
    }
  return d;
}

BlockSparseMatrix random_blocks(int nb, int bs, double fill, std::mt19937_64& rng, double diag_shift = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
  BlockSparseBuilder b(nb, nb, bs);
  std::vector<double> blk(bs * bs);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < nb; ++c) {
      if (r != c && p(rng) > fill) continue;
      for (double& v : blk) v = u(rng);
      if (r == c)
        for (int i = 0; i < bs; ++i) blk[i * bs + i] += diag_shift;
      b.add(r, c, blk);
    }
  return b.build();
}

}  // namespace

TEST_CASE("builder accumulates and the matvec matches dense") {
  BlockSparseBuilder b(3, 3, 2);
  std::vector<double> one{1, 2, 3, 4};
  b.add(0, 1, one);
  b.add(0, 1, one, 0.5);
  b.add(2, 0, one, -1.0);
  auto a = b.build();
  CHECK(a.rows() == 6);
  auto blk = a.block(0, 1);
  REQUIRE(blk.size() == 4);
  CHECK(blk[3] == doctest::Approx(6.0));
  CHECK(a.block(1, 1).empty());

  std::vector<double> x{1, -1, 2, 0.5, 3, 1};
  auto y = a.apply(x);
  auto d = dense(a);
  for (int i = 0; i < 6; ++i) {
    double s = 0.0;
    for (int j = 0; j < 6; ++j) s += d[i * 6 + j] * x[j];
    CHECK(y[i] == doctest::Approx(s));
  }
}

TEST_CASE("product, sum, transpose and row scaling against dense") {
  std::mt19937_64 rng(3);
  auto a = random_blocks(5, 3, 0.4, rng), b = random_blocks(5, 3, 0.4, rng);
  const int n = 15;
  auto da = dense(a), db = dense(b);

  auto ab = dense(a * b);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += da[i * n + l] * db[l * n + j];
      CHECK(ab[i * n + j] == doctest::Approx(s).epsilon(1e-13));
    }
  auto sum = dense(a.plus(b, -2.0));
  auto at = dense(a.transpose());
  std::vector<double> dscale(n);
  for (int i = 0; i < n; ++i) dscale[i] = 1.0 + i;
  auto sc = dense(a.scale_rows(dscale));
  auto im = dense(a.identity_minus(0.25));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(sum[i * n + j] == doctest::Approx(da[i * n + j] - 2.0 * db[i * n + j]));
      CHECK(at[i * n + j] == da[j * n + i]);
      CHECK(sc[i * n + j] == doctest::Approx(dscale[i] * da[i * n + j]));
      CHECK(im[i * n + j] == doctest::Approx((i == j ? 1.0 : 0.0) - 0.25 * da[i * n + j]));
    }
  CHECK(a.max_abs_diff(a) == 0.0);
}

TEST_CASE("GMRES meets the relative residual bound") {
  std::mt19937_64 rng(5);
  auto a = random_blocks(30, 3, 0.15, rng, 6.0);
  std::vector<double> rhs(a.rows());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : rhs) v = u(rng);
  auto op = [&](std::span<const double> x, std::span<double> y) { a.apply(x, y); };
  auto ident = [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); };

  for (double tol : {1e-8, 1e-12}) {
    LinearSolverConfig cfg;
    cfg.tol = tol;
    cfg.restart = 10;  // forces restarts
    std::vector<double> x(a.rows(), 0.0);
    auto rep = gmres(op, ident, rhs, x, cfg);
    CHECK(rep.converged);
    auto bx = a.apply(x);
    double r = 0.0, nb = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
      r += (bx[i] - rhs[i]) * (bx[i] - rhs[i]);
      nb += rhs[i] * rhs[i];
    }
    CHECK(std::sqrt(r) <= tol * std::max(1.0, std::sqrt(nb)) * 1.01);
    CHECK(rep.residual == doctest::Approx(std::sqrt(r)).epsilon(1e-3));
  }

  SUBCASE("iteration cap reports non-convergence") {
    LinearSolverConfig cfg;
    cfg.tol = 1e-14;
    cfg.restart = 2;
    cfg.max_iterations = 2;
    std::vector<double> x(a.rows(), 0.0);
    auto rep = gmres(op, ident, rhs, x, cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations <= 2);
  }

  SUBCASE("exact initial guess needs no iterations") {
    std::vector<double> xs(a.rows(), 0.5);
    auto b = a.apply(xs);
    auto x = xs;
    auto rep = gmres(op, ident, b, x, LinearSolverConfig{});
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
  }
}

TEST_CASE("direct solver") {
  std::mt19937_64 rng(9);
  auto a = random_blocks(20, 6, 0.2, rng, 1.0);
  std::vector<double> xs(a.rows());
  for (int i = 0; i < a.rows(); ++i) xs[i] = std::sin(0.3 * i);
  auto b = a.apply(xs);
  DirectSolver lu(a);
  std::vector<double> x(a.rows());
  lu.solve(b, x);
  for (int i = 0; i < a.rows(); ++i) CHECK(x[i] == doctest::Approx(xs[i]).epsilon(1e-9));
}
