#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "sldg/kernels.hpp"

using namespace sldg;
namespace k = sldg::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

struct Csr {
  int rows = 0;
  std::vector<std::int32_t> ptr{0}, cols;
  std::vector<double> vals;
  k::CsrView view() const { return {rows, ptr, cols, vals}; }
};

Csr random_csr(int rows, int cols, int per_row_max, std::mt19937_64& rng) {
  Csr a;
  a.rows = rows;
  std::uniform_int_distribution<int> cnt(0, per_row_max), col(0, cols - 1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int r = 0; r < rows; ++r) {
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) {
      a.cols.push_back(col(rng));
      a.vals.push_back(val(rng));
    }
    a.ptr.push_back(static_cast<std::int32_t>(a.cols.size()));
  }
  return a;
}

const std::vector<std::size_t> kLengths{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 1001};

}  // namespace

TEST_CASE("scalar reference kernels against naive loops") {
  std::mt19937_64 rng(7);
  for (std::size_t n : kLengths) {
    auto a = random_vec(n, rng), b = random_vec(n, rng);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    CHECK(k::scalar::dot(a, b) == doctest::Approx(dot).epsilon(1e-14));
    CHECK(k::scalar::nrm2(a) == doctest::Approx(std::sqrt(k::scalar::dot(a, a))).epsilon(1e-14));
    auto y = b;
    k::scalar::axpy(0.3, a, y);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(b[i] + 0.3 * a[i]));
  }
  auto m = random_csr(40, 30, 9, rng);
  auto x = random_vec(30, rng);
  std::vector<double> y(40);
  k::scalar::csr_matvec(m.view(), x, y);
  for (int r = 0; r < 40; ++r) {
    double s = 0.0;
    for (int p = m.ptr[r]; p < m.ptr[r + 1]; ++p) s += m.vals[p] * x[m.cols[p]];
    CHECK(y[r] == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("nrm2 avoids overflow and underflow") {
  std::vector<double> big{1e200, 1e200, -1e200};
  CHECK(k::nrm2(big) == doctest::Approx(std::sqrt(3.0) * 1e200));
  std::vector<double> tiny{3e-200, 4e-200};
  CHECK(k::nrm2(tiny) == doctest::Approx(5e-200));
}

#if SLDG_HAVE_AVX2_KERNELS
TEST_CASE("AVX2 kernels match the scalar references") {
  if (!k::avx2_supported()) {
    MESSAGE("CPU lacks AVX2/FMA; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(11);
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    auto a = random_vec(n, rng), b = random_vec(n, rng);
    const double ref_dot = k::scalar::dot(a, b);
    // Reassociation: bound by n * eps * sum |a_i b_i|.
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    CHECK(std::abs(k::avx2::dot(a, b) - ref_dot) <= 4.0 * (n + 1) * 2.3e-16 * mag);
    CHECK(k::avx2::nrm2(a) == doctest::Approx(k::scalar::nrm2(a)).epsilon(1e-13));

    auto y1 = b, y2 = b;
    k::scalar::axpy(-1.7, a, y1);
    k::avx2::axpy(-1.7, a, y2);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 4e-16 * (std::abs(y1[i]) + 1.0));
  }
  for (int rows : {1, 3, 17, 200}) {
    auto m = random_csr(rows, 50, 13, rng);
    auto x = random_vec(50, rng);
    std::vector<double> y1(rows), y2(rows);
    k::scalar::csr_matvec(m.view(), x, y1);
    k::avx2::csr_matvec(m.view(), x, y2);
    for (int r = 0; r < rows; ++r) CHECK(std::abs(y1[r] - y2[r]) <= 1e-14 * (1.0 + std::abs(y1[r])));
  }
}
#endif

TEST_CASE("dispatch selection") {
  const auto initial = k::active_isa();
  CHECK(k::set_active_isa(k::Isa::Scalar) == k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  const auto got = k::set_active_isa(k::Isa::Avx2);
  CHECK(got == (k::avx2_supported() ? k::Isa::Avx2 : k::Isa::Scalar));
  k::set_active_isa(initial);

  const char* env = std::getenv("SLDG_SIMD");
  if (env && std::string(env) == "scalar") CHECK(initial == k::Isa::Scalar);
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
}
