#pragma once

// Term-I evaluation in 1D: integrate a DG field against the backward-advected
// test functions over the upstream interval of each Eulerian cell.

#include <array>
#include <vector>

#include "sldg/characteristics.hpp"
#include "sldg/core.hpp"

namespace sldg {

/// Upstream image of Eulerian cell `cell` traced from t_end back to t_start,
/// with the degree-k polynomials that interpolate each test basis function at
/// the traced Gauss-Lobatto feet.
struct UpstreamInterval {
  int cell = 0;
  int k = 0;
  double t_end = 0.0;
  double t_start = 0.0;
  double left = 0.0;   // foot of x_{j-1/2}, unwrapped
  double right = 0.0;  // foot of x_{j+1/2}, unwrapped
  std::vector<double> feet;

  /// Test polynomial m is sum_p coeffs[m][p] s^p with s = (x - origin) / scale.
  double origin = 0.0;
  double scale = 1.0;
  std::vector<std::array<double, 3>> coeffs;

  double eval_test(int m, double x) const {
    double s = (x - origin) / scale;
    const auto& c = coeffs[m];
    return c[0] + s * (c[1] + s * c[2]);
  }
};

struct SubInterval {
  double a = 0.0;  // bounds in the upstream interval's (unwrapped) coordinates
  double b = 0.0;
  int cell = 0;        // background cell after periodic wrap; -1 when outside (zero bc)
  double shift = 0.0;  // x + shift lies in the wrapped background cell
};

UpstreamInterval build_upstream_1d(const Mesh1D& mesh, int j, double t_end, double t_start, const VelocityField1D& v,
                                   int k, int substeps);

std::vector<SubInterval> split_subintervals(const UpstreamInterval& up, const Mesh1D& mesh,
                                            Boundary bc = Boundary::Periodic);

/// Loads (u, Psi*_m) over the upstream interval, m = 0..k.
std::vector<double> remap_term1_1d(const Field1D& u, const UpstreamInterval& up,
                                   Boundary bc = Boundary::Periodic);

/// Same, with the sub-interval split precomputed.
void remap_term1_1d(const Field1D& u, const UpstreamInterval& up, std::span<const SubInterval> pieces,
                    std::span<double> loads);

}  // namespace sldg
