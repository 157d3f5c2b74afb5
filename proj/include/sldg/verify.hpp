#pragma once

// Property suites checked against independent oracles; shared by the CLI
// `verify` subcommand and the test binaries.

#include <array>
#include <string>
#include <vector>

namespace sldg::verify {

struct Check {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity (error, order, ...)
  double tolerance = 0.0;  // pinned bound
  std::string detail;
};

std::vector<Check> basis_orthogonality();
std::vector<Check> gauss_exactness();
std::vector<Check> tracer_convergence();
std::vector<Check> remap_tiling_and_translation();
std::vector<Check> green_area_vs_clipping();
std::vector<Check> ldg_energy_identity();
std::vector<Check> tableau_invariants();

/// All suites in order.
std::vector<Check> run_all();

/// Area of the intersection of a simple polygon (any orientation) with an
/// axis-aligned rectangle, by Sutherland-Hodgman clipping.
double clipped_polygon_area(const std::vector<std::array<double, 2>>& poly, double x0, double y0, double x1,
                            double y1);

}  // namespace sldg::verify
