#include <atomic>
#include <cstdlib>
#include <string>

#include "sldg/kernels.hpp"

namespace sldg::kernels {

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if SLDG_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

namespace {

Isa initial_isa() {
  if (const char* env = std::getenv("SLDG_SIMD"); env != nullptr && std::string(env) == "scalar") return Isa::Scalar;
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported()) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

#if SLDG_HAVE_AVX2_KERNELS
#define SLDG_DISPATCH(fn, ...) \
  return active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define SLDG_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) { SLDG_DISPATCH(dot, a, b); }
double nrm2(std::span<const double> a) { SLDG_DISPATCH(nrm2, a); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { SLDG_DISPATCH(axpy, alpha, x, y); }
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  SLDG_DISPATCH(csr_matvec, a, x, y);
}

}  // namespace sldg::kernels
