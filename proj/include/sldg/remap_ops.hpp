#pragma once

// Term-I remaps assembled as block-sparse weight matrices: row block j holds
// the integrals of the upstream test functions of cell j against the basis of
// every background cell its upstream image touches, so loads = R u.

#include "sldg/linalg.hpp"
#include "sldg/remap1d.hpp"
#include "sldg/remap2d.hpp"

namespace sldg {

/// Per-cell dim x dim weights for one upstream interval (row-major, m x n).
std::vector<std::pair<int, std::vector<double>>> interval_weights(const UpstreamInterval& up, const Mesh1D& mesh,
                                                                  Boundary bc);

BlockSparseMatrix remap_matrix_1d(const Mesh1D& mesh, int k, double t_end, double t_start, const VelocityField1D& v,
                                  int substeps, Boundary bc = Boundary::Periodic);

BlockSparseMatrix remap_matrix_2d(const Mesh2D& mesh, int k, double t_end, double t_start, const VelocityField2D& v,
                                  RemapMode mode, int substeps, Boundary bc = Boundary::Periodic);

/// Worker count honoured by the parallel loops (SLDG_THREADS caps it).
int worker_threads();

}  // namespace sldg
