#include "sldg/remap_ops.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sldg {

int worker_threads() {
  int n = 1;
#ifdef _OPENMP
  n = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("SLDG_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(1, n);
}

std::vector<std::pair<int, std::vector<double>>> interval_weights(const UpstreamInterval& up, const Mesh1D& mesh,
                                                                  Boundary bc) {
  const int dim = up.k + 1;
  const auto& q = gauss_rule(up.k + 1);
  Basis1D basis(up.k);
  std::vector<std::pair<int, std::vector<double>>> out;
  for (const auto& pc : split_subintervals(up, mesh, bc)) {
    if (pc.cell < 0) continue;
    std::vector<double> w(static_cast<std::size_t>(dim) * dim, 0.0);
    const double len = pc.b - pc.a;
    const double xc = mesh.center(pc.cell);
    for (std::size_t i = 0; i < q.size(); ++i) {
      double x = pc.a + (q.nodes[i] + 0.5) * len;
      double xi = (x + pc.shift - xc) / mesh.dx();
      for (int m = 0; m < dim; ++m) {
        double tm = q.weights[i] * len * up.eval_test(m, x);
        for (int n = 0; n < dim; ++n) w[m * dim + n] += tm * basis.value(n, xi);
      }
    }
    out.emplace_back(pc.cell, std::move(w));
  }
  return out;
}

namespace {

template <class PerCell>
BlockSparseMatrix assemble(int ncells, int dim, PerCell&& per_cell) {
  std::vector<std::vector<std::pair<int, std::vector<double>>>> rows(ncells);
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_threads())
  for (int j = 0; j < ncells; ++j) {
    try {
      rows[j] = per_cell(j);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  BlockSparseBuilder builder(ncells, ncells, dim);
  for (int j = 0; j < ncells; ++j)
    for (const auto& [col, w] : rows[j]) builder.add(j, col, w);
  return builder.build();
}

}  // namespace

BlockSparseMatrix remap_matrix_1d(const Mesh1D& mesh, int k, double t_end, double t_start, const VelocityField1D& v,
                                  int substeps, Boundary bc) {
  return assemble(mesh.size(), k + 1, [&](int j) {
    auto up = build_upstream_1d(mesh, j, t_end, t_start, v, k, substeps);
    return interval_weights(up, mesh, bc);
  });
}

BlockSparseMatrix remap_matrix_2d(const Mesh2D& mesh, int k, double t_end, double t_start, const VelocityField2D& v,
                                  RemapMode mode, int substeps, Boundary bc) {
  return assemble(mesh.size(), Basis2D(k).dim(), [&](int j) {
    auto up = build_upstream_2d(mesh, j, t_end, t_start, v, k, mode, substeps, bc);
    std::vector<std::pair<int, std::vector<double>>> out;
    for (const auto& r : clip_upstream(up, mesh, bc)) out.emplace_back(r.background, region_weights(up, r));
    return out;
  });
}

}  // namespace sldg
