#include "entropylab/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace entropylab::kernels {

void gemv_scalar(const double* A, std::size_t N, std::size_t J, const double* x, double* out) {
    for (std::size_t n = 0; n < N; ++n) {
        const double* row = A + n * J;
        double acc = 0.0;
        for (std::size_t j = 0; j < J; ++j) acc += row[j] * x[j];
        out[n] = acc;
    }
}

double sup_abs_scalar(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = std::fabs(v[i]);
        if (a > m) m = a;
    }
    return m;
}

double sumsq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

#if defined(__x86_64__) || defined(_M_X64)

__attribute__((target("avx2,fma")))
void gemv_avx2(const double* A, std::size_t N, std::size_t J, const double* x, double* out) {
    for (std::size_t n = 0; n < N; ++n) {
        const double* row = A + n * J;
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= J; j += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc);
        // note: fma changes rounding vs the scalar loop; tests compare with a
        // tolerance scaled to J, not bitwise
        double lanes[4];
        _mm256_storeu_pd(lanes, acc);
        double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
        for (; j < J; ++j) s += row[j] * x[j];
        out[n] = s;
    }
}

__attribute__((target("avx2")))
double sup_abs_avx2(const double* v, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d mx = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        mx = _mm256_max_pd(mx, _mm256_andnot_pd(signmask, _mm256_loadu_pd(v + i)));
    double lanes[4];
    _mm256_storeu_pd(lanes, mx);
    double m = lanes[0];
    for (int k = 1; k < 4; ++k) if (lanes[k] > m) m = lanes[k];
    for (; i < n; ++i) {
        double a = std::fabs(v[i]);
        if (a > m) m = a;
    }
    return m;
}

__attribute__((target("avx2,fma")))
double sumsq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

static bool have_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

static const bool use_avx2 = have_avx2();

void gemv(const double* A, std::size_t N, std::size_t J, const double* x, double* out) {
    if (use_avx2) gemv_avx2(A, N, J, x, out); else gemv_scalar(A, N, J, x, out);
}
double sup_abs(const double* v, std::size_t n) {
    return use_avx2 ? sup_abs_avx2(v, n) : sup_abs_scalar(v, n);
}
double sumsq_diff(const double* a, const double* b, std::size_t n) {
    return use_avx2 ? sumsq_diff_avx2(a, b, n) : sumsq_diff_scalar(a, b, n);
}
const char* active_isa() { return use_avx2 ? "avx2" : "scalar"; }

#else

void gemv(const double* A, std::size_t N, std::size_t J, const double* x, double* out) {
    gemv_scalar(A, N, J, x, out);
}
double sup_abs(const double* v, std::size_t n) { return sup_abs_scalar(v, n); }
double sumsq_diff(const double* a, const double* b, std::size_t n) { return sumsq_diff_scalar(a, b, n); }
const char* active_isa() { return "scalar"; }

#endif

} // namespace entropylab::kernels
