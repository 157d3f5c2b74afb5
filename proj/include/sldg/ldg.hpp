#pragma once

// Local DG second-derivative operators with alternating fluxes: q = grad_h u
// and p = div_h q eliminated cell-locally into one block-sparse matrix.

#include <array>
#include <vector>

#include "sldg/core.hpp"
#include "sldg/linalg.hpp"

namespace sldg {

/// Interface traces used for u-hat and q-hat; they must come from opposite
/// sides. Side::Left is the minus (left/lower) trace.
struct FluxChoice {
  Side u_hat = Side::Left;
  Side q_hat = Side::Right;

  static FluxChoice standard() { return {Side::Left, Side::Right}; }  // u-hat = u^-, q-hat = q^+
  static FluxChoice mirrored() { return {Side::Right, Side::Left}; }  // u-hat = u^+, q-hat = q^-
  void validate() const;
};

/// Per-cell 1D matrices on the scaled-Legendre basis (sizes (k+1)^2, row m
/// is the test index): M mass; C, D, E, F interface products; N = (phi_l, phi_m').
struct LocalMatrices {
  int k = 0;
  double dx = 1.0;
  std::vector<double> M, C, D, E, F, N;

  static LocalMatrices build(int k, double dx);
};

struct LdgOperator {
  int dimension = 1;
  int k = 0;
  Boundary bc = Boundary::Periodic;
  std::array<FluxChoice, 2> flux{};
  std::vector<double> mass;                 // diagonal of M, one entry per dof
  std::vector<BlockSparseMatrix> gradient;  // per direction: q_d = G_d u
  BlockSparseMatrix laplacian;              // D_Delta
  BlockSparseMatrix weak;                   // M D_Delta

  int size() const { return laplacian.rows(); }
};

LdgOperator assemble_ldg_1d(const Mesh1D& mesh, int k, FluxChoice flux = FluxChoice::standard(),
                            Boundary bc = Boundary::Periodic);
LdgOperator assemble_ldg_2d(const Mesh2D& mesh, int k, FluxChoice flux_x = FluxChoice::standard(),
                            FluxChoice flux_y = FluxChoice::standard(), Boundary bc = Boundary::Periodic);

struct Dissipativity {
  double s = 0.0;      // integral of (D_Delta u) u
  double q_norm2 = 0.0;  // sum over directions of ||q_d||^2
};

Dissipativity dissipativity_check(const LdgOperator& op, std::span<const double> u);

/// M-weighted inner product of coefficient vectors.
double mass_dot(std::span<const double> mass, std::span<const double> a, std::span<const double> b);

}  // namespace sldg
