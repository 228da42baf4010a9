#include "entropylab/expsum.hpp"

#include <cmath>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace entropylab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long kDirectFloor = 65536;  // below this, incremental gains nothing
constexpr int kResync = 2048;         // exact sincos cadence in the smooth region

void check_args(const std::vector<long>& cps) {
    if (cps.empty()) throw std::invalid_argument("no checkpoints");
    long prev = 0;
    for (long J : cps) {
        if (J <= prev) throw std::invalid_argument("checkpoints must be ascending and >= 1");
        prev = J;
    }
}
} // namespace

std::vector<std::complex<double>> recip_betas_scalar(int64_t n, const std::vector<long>& cps) {
    check_args(cps);
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    const long Jmax = cps.back();
    std::vector<std::complex<double>> out;
    out.reserve(cps.size());
    std::size_t ci = 0;
    double Sr = 0.0, Si = 0.0;
    auto flush = [&](long j) {
        while (ci < cps.size() && cps[ci] == j) {
            out.emplace_back(Sr / static_cast<double>(j), Si / static_cast<double>(j));
            ++ci;
        }
    };
    const long direct_end =
        std::min<int64_t>(Jmax, std::max<int64_t>(n, kDirectFloor));
    for (long j = 1; j <= direct_end; ++j) {
        double frac = static_cast<double>(n % j) / static_cast<double>(j);
        Sr += std::cos(kTwoPi * frac);
        Si += std::sin(kTwoPi * frac);
        flush(j);
    }
    if (direct_end < Jmax) {
        const double K = kTwoPi * static_cast<double>(n);
        double u = 1.0 / static_cast<double>(direct_end);
        double zr = std::cos(K * u), zi = std::sin(K * u);
        int resync = 0;
        for (long j = direct_end + 1; j <= Jmax; ++j) {
            if (++resync == kResync) {
                resync = 0;
                u = 1.0 / static_cast<double>(j);
                double th = K * u;
                zr = std::cos(th);
                zi = std::sin(th);
            } else {
                // u' = 1/j from u = 1/(j-1): u/(1+u) to O(u^4)
                double un = u * (1.0 - u * (1.0 - u));
                double d = -K * u * un;
                double d2 = d * d;
                double c = 1.0 - d2 * (0.5 - d2 * (1.0 / 24.0));
                double s = d * (1.0 - d2 * ((1.0 / 6.0) - d2 * (1.0 / 120.0)));
                double nzr = zr * c - zi * s;
                zi = zr * s + zi * c;
                zr = nzr;
                u = un;
            }
            Sr += zr;
            Si += zi;
            flush(j);
        }
    }
    return out;
}

#if defined(__x86_64__) || defined(_M_X64)
__attribute__((target("avx2,fma"))) void recip_betas_x4_avx2(
    const int64_t n[4], const std::vector<long>& cps,
    std::vector<std::complex<double>> out[4]) {
    check_args(cps);
    int64_t nmax = 0;
    for (int l = 0; l < 4; ++l) {
        if (n[l] < 0) throw std::invalid_argument("n must be >= 0");
        nmax = std::max(nmax, n[l]);
    }
    const long Jmax = cps.back();
    for (int l = 0; l < 4; ++l) {
        out[l].clear();
        out[l].reserve(cps.size());
    }
    std::size_t ci = 0;
    alignas(32) double Sr[4] = {0, 0, 0, 0}, Si[4] = {0, 0, 0, 0};
    const long direct_end = std::min<int64_t>(Jmax, std::max<int64_t>(nmax, kDirectFloor));
    for (long j = 1; j <= direct_end; ++j) {
        for (int l = 0; l < 4; ++l) {
            double frac = static_cast<double>(n[l] % j) / static_cast<double>(j);
            Sr[l] += std::cos(kTwoPi * frac);
            Si[l] += std::sin(kTwoPi * frac);
        }
        while (ci < cps.size() && cps[ci] == j) {
            for (int l = 0; l < 4; ++l)
                out[l].emplace_back(Sr[l] / static_cast<double>(j),
                                    Si[l] / static_cast<double>(j));
            ++ci;
        }
    }
    if (direct_end < Jmax) {
        const __m256d K = _mm256_setr_pd(kTwoPi * n[0], kTwoPi * n[1], kTwoPi * n[2],
                                         kTwoPi * n[3]);
        const __m256d one = _mm256_set1_pd(1.0);
        const __m256d half = _mm256_set1_pd(0.5);
        const __m256d c24 = _mm256_set1_pd(1.0 / 24.0);
        const __m256d c6 = _mm256_set1_pd(1.0 / 6.0);
        const __m256d c120 = _mm256_set1_pd(1.0 / 120.0);
        double u = 1.0 / static_cast<double>(direct_end);  // shared across lanes
        __m256d zr, zi;
        {
            alignas(32) double tr[4], ti[4];
            for (int l = 0; l < 4; ++l) {
                double th = kTwoPi * n[l] * u;
                tr[l] = std::cos(th);
                ti[l] = std::sin(th);
            }
            zr = _mm256_load_pd(tr);
            zi = _mm256_load_pd(ti);
        }
        __m256d accr = _mm256_load_pd(Sr);
        __m256d acci = _mm256_load_pd(Si);
        long next_cp = cps[ci];
        int resync = 0;
        for (long j = direct_end + 1; j <= Jmax; ++j) {
            if (++resync == kResync) {
                resync = 0;
                u = 1.0 / static_cast<double>(j);
                alignas(32) double tr[4], ti[4];
                for (int l = 0; l < 4; ++l) {
                    double th = kTwoPi * n[l] * u;
                    tr[l] = std::cos(th);
                    ti[l] = std::sin(th);
                }
                zr = _mm256_load_pd(tr);
                zi = _mm256_load_pd(ti);
            } else {
                double un = u * (1.0 - u * (1.0 - u));
                __m256d d = _mm256_mul_pd(K, _mm256_set1_pd(-u * un));
                __m256d d2 = _mm256_mul_pd(d, d);
                __m256d c = _mm256_fnmadd_pd(
                    d2, _mm256_fnmadd_pd(d2, c24, half), one);
                __m256d s = _mm256_mul_pd(
                    d, _mm256_fnmadd_pd(d2, _mm256_fnmadd_pd(d2, c120, c6), one));
                __m256d nzr = _mm256_fnmadd_pd(zi, s, _mm256_mul_pd(zr, c));
                zi = _mm256_fmadd_pd(zr, s, _mm256_mul_pd(zi, c));
                zr = nzr;
                u = un;
            }
            accr = _mm256_add_pd(accr, zr);
            acci = _mm256_add_pd(acci, zi);
            if (j == next_cp) {
                _mm256_store_pd(Sr, accr);
                _mm256_store_pd(Si, acci);
                while (ci < cps.size() && cps[ci] == j) {
                    for (int l = 0; l < 4; ++l)
                        out[l].emplace_back(Sr[l] / static_cast<double>(j),
                                            Si[l] / static_cast<double>(j));
                    ++ci;
                }
                next_cp = ci < cps.size() ? cps[ci] : -1;
            }
        }
    }
}
#endif

std::vector<std::vector<std::complex<double>>> recip_betas_batch(
    const std::vector<int64_t>& ns, const std::vector<long>& cps) {
    std::vector<std::vector<std::complex<double>>> out(ns.size());
    std::size_t i = 0;
#if defined(__x86_64__) || defined(_M_X64)
    static const bool have_avx2 =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (have_avx2) {
        for (; i + 4 <= ns.size(); i += 4) {
            int64_t n4[4] = {ns[i], ns[i + 1], ns[i + 2], ns[i + 3]};
            std::vector<std::complex<double>> o4[4];
            recip_betas_x4_avx2(n4, cps, o4);
            for (int l = 0; l < 4; ++l) out[i + l] = std::move(o4[l]);
        }
    }
#endif
    for (; i < ns.size(); ++i) out[i] = recip_betas_scalar(ns[i], cps);
    return out;
}

} // namespace entropylab
