#pragma once

// Dense kernels for the Monte Carlo hot loop, with a scalar reference
// implementation and an AVX2 variant chosen once at startup.  Both variants
// stay exported so tests can check them against each other on the same data.

#include <cstddef>

namespace entropylab::kernels {

// out[n] = sum_j A[n*J + j] * x[j]   (A row-major N x J)
void gemv_scalar(const double* A, std::size_t N, std::size_t J, const double* x, double* out);
double sup_abs_scalar(const double* v, std::size_t n);
double sumsq_diff_scalar(const double* a, const double* b, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void gemv_avx2(const double* A, std::size_t N, std::size_t J, const double* x, double* out);
double sup_abs_avx2(const double* v, std::size_t n);
double sumsq_diff_avx2(const double* a, const double* b, std::size_t n);
#endif

// dispatched entry points
void gemv(const double* A, std::size_t N, std::size_t J, const double* x, double* out);
double sup_abs(const double* v, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);

// "avx2" or "scalar"
const char* active_isa();

} // namespace entropylab::kernels
