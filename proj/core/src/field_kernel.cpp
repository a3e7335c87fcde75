// Batched mode-sum evaluation. This translation unit is compiled with
// fast-math + openmp-simd so gcc can emit the libmvec vector cos; the
// split between argument assembly, cos, and accumulation keeps each loop
// trivially vectorizable. Everything is deterministic for a fixed binary:
// batches are sliced at fixed boundaries independent of the caller's
// threading.
#include <cmath>
#include <cstddef>

#include "turbcloud/field.hpp"

namespace turbcloud::kernel {

namespace {

constexpr std::size_t kSlice = 1024;

template <int Dim>
void eval_slice(const FieldSoA& f, double t, const double* x, const double* y,
                const double* z, std::size_t n, double* ux, double* uy,
                double* uz) {
  double arg[kSlice];
  double cs[kSlice];
  for (std::size_t i = 0; i < n; ++i) ux[i] = 0.0;
  if constexpr (Dim >= 2) {
    for (std::size_t i = 0; i < n; ++i) uy[i] = 0.0;
  }
  if constexpr (Dim >= 3) {
    for (std::size_t i = 0; i < n; ++i) uz[i] = 0.0;
  }
  const std::size_t nm = f.size();
  for (std::size_t m = 0; m < nm; ++m) {
    const double base = f.omega[m] * t + f.phase[m];
    const double kxm = f.kx[m];
    const double kym = Dim >= 2 ? f.ky[m] : 0.0;
    const double kzm = Dim >= 3 ? f.kz[m] : 0.0;
    const double axm = f.ax[m];
    const double aym = Dim >= 2 ? f.ay[m] : 0.0;
    const double azm = Dim >= 3 ? f.az[m] : 0.0;
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
      double a = base + kxm * x[i];
      if constexpr (Dim >= 2) a += kym * y[i];
      if constexpr (Dim >= 3) a += kzm * z[i];
      arg[i] = a;
    }
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) cs[i] = std::cos(arg[i]);
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
      ux[i] += axm * cs[i];
      if constexpr (Dim >= 2) uy[i] += aym * cs[i];
      if constexpr (Dim >= 3) uz[i] += azm * cs[i];
    }
  }
}

} // namespace

void eval_velocity_batch(const FieldSoA& f, int dim, double t, const double* x,
                         const double* y, const double* z, std::size_t n,
                         double* ux, double* uy, double* uz) {
  std::size_t off = 0;
  while (off < n) {
    const std::size_t len = std::min(kSlice, n - off);
    switch (dim) {
      case 1:
        eval_slice<1>(f, t, x + off, nullptr, nullptr, len, ux + off, nullptr,
                      nullptr);
        break;
      case 2:
        eval_slice<2>(f, t, x + off, y + off, nullptr, len, ux + off, uy + off,
                      nullptr);
        break;
      default:
        eval_slice<3>(f, t, x + off, y + off, z + off, len, ux + off, uy + off,
                      uz + off);
        break;
    }
    off += len;
  }
}

} // namespace turbcloud::kernel
