#pragma once

#include "entropylab/families.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/trigpoly.hpp"

#include <vector>

namespace entropylab {

// beta(n, k) = n^{-1} sum_{j<=n} e^{2 pi i a_j k}; the Fourier multiplier of S_n
std::complex<double> multiplier_avg(const AveragingFamily& family, long n, const mpz_class& k);

// all prefix multipliers beta(1..maxn, k) in one pass of length maxn
std::vector<std::complex<double>> multiplier_prefix(const AveragingFamily& family, long maxn,
                                                    const mpz_class& k);

// S_n f: coefficientwise multiplication by beta(n, k)
TrigPoly apply_S(const TrigPoly& f, const AveragingFamily& family, long n);

// T_b f: c_k -> e^{2 pi i k b} c_k  (translation by b, an L2 isometry)
TrigPoly apply_T(const TrigPoly& f, double b);

// d_f over the given n values: dist[i][j] = ||S_{ns[i]} f - S_{ns[j]} f||_2
FinitePseudoMetric orbit_metric(const TrigPoly& f, const AveragingFamily& family,
                                const std::vector<long>& ns);

// (1/J) sum_{j<=J} T_{b_j} f with b_j = (j-1) w
TrigPoly cesaro_T_average(const TrigPoly& f, const TranslationFamily& trans, long J);

} // namespace entropylab
