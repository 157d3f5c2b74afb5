#include <algorithm>
#include <cmath>

#include "sldg/kernels.hpp"

namespace sldg::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2_rescaled(std::span<const double> a) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  if (amax == 0.0 || !std::isfinite(amax)) return amax;
  double s = 0.0;
  for (double v : a) s += (v / amax) * (v / amax);
  return amax * std::sqrt(s);
}

double nrm2(std::span<const double> a) {
  const double s = dot(a, a);
  // Sum of squares outside the normal range: redo with scaling.
  if (!(s > 1e-280 && s < 1e280)) return nrm2_rescaled(a);
  return std::sqrt(s);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (std::int32_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) s += a.vals[p] * x[a.cols[p]];
    y[r] = s;
  }
}

}  // namespace sldg::kernels::scalar
