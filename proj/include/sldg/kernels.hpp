#pragma once

// Vector and sparse matrix-vector kernels used by the Krylov solver.
//
// Every kernel has a portable scalar reference in kernels::scalar and, on
// x86-64, an AVX2+FMA variant in kernels::avx2. The unqualified entry points
// dispatch at runtime: AVX2 when the CPU reports avx2 and fma, scalar
// otherwise. Setting SLDG_SIMD=scalar in the environment pins the scalar path.

#include <cstdint>
#include <span>
#include <string_view>

namespace sldg::kernels {

/// Read-only view of a CSR matrix with 32-bit column indices.
struct CsrView {
  int rows = 0;
  std::span<const std::int32_t> row_ptr;  // rows + 1 entries
  std::span<const std::int32_t> cols;
  std::span<const double> vals;
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// True when the running CPU can execute the AVX2 variants.
bool avx2_supported();

/// ISA used by the dispatching entry points.
Isa active_isa();

/// Override the dispatch choice (tests, benchmarking). Requesting Avx2 on a
/// CPU without it falls back to Scalar; the effective choice is returned.
Isa set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double nrm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = A x
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double nrm2(std::span<const double> a);
/// Two-pass norm scaled by max |a_i|; the fallback when the sum of squares
/// over- or underflows.
double nrm2_rescaled(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SLDG_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double nrm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#else
#define SLDG_HAVE_AVX2_KERNELS 0
#endif

}  // namespace sldg::kernels
