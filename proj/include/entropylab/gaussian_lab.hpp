#pragma once

#include "entropylab/families.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/trigpoly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace entropylab {

// G_n(omega) = sum_j A[n][j] g_j(omega), g_j i.i.d. standard normal.
struct GaussianFamily {
    std::vector<std::vector<double>> A;  // N x J, row-major

    std::size_t N() const { return A.size(); }
    std::size_t J() const { return A.empty() ? 0 : A.front().size(); }
    void check() const;  // rectangular, nonempty, finite entries

    double variance(std::size_t n) const;  // sum_j A[n][j]^2
};

enum class Verdict { pass, fail, inconclusive };

struct McReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::optional<double> bound;  // one-sided upper bound when present
    Verdict verdict = Verdict::pass;
    std::string note;

    // pass iff estimate + 3 SE <= bound, fail iff estimate - 3 SE > bound,
    // otherwise inconclusive (raise the sample count)
    void judge_one_sided();
};

const char* to_string(Verdict v);

// dist[n][n'] = Euclidean distance between rows of A (closed form, no sampling)
FinitePseudoMetric exact_metric(const GaussianFamily& fam);

// Monte Carlo E sup_n |G_n|; no bound attached
McReport simulate_sup(const GaussianFamily& fam, std::size_t samples, uint64_t seed);

// E sup <= 6 s*, s* the smallest empirical s with P(sup <= s) >= 1/2
McReport fernique_check(const GaussianFamily& fam, std::size_t samples, uint64_t seed);

struct SudakovDetail {
    double delta;
    std::size_t covering;
    double numerator;  // delta * sqrt(log covering)
};

struct SudakovReport {
    double ratio = 0.0;  // max numerator / E sup estimate
    std::vector<SudakovDetail> detail;
    McReport sup_report;
    bool greedy_covering = false;  // caveat: covering only upper-bounded
};

SudakovReport sudakov_ratio(const GaussianFamily& fam, const std::vector<double>& deltas,
                            std::size_t samples, uint64_t seed);

// rotation invariance: (G, H) =d (G sin t + H cos t, G cos t - H sin t);
// empirical 2N x 2N covariance agreement, Bonferroni-corrected entrywise test
McReport rotation_test(const GaussianFamily& fam, double theta, std::size_t samples,
                       uint64_t seed);

struct ScalarIdentity {
    enum class Kind { mgf, tail_integral, moment_ratio } kind;
    double lambda = 1.0, sigma = 1.0;  // mgf
    double p = 2.0;                    // moment_ratio

    static ScalarIdentity Mgf(double lambda, double sigma);
    static ScalarIdentity TailIntegral();
    static ScalarIdentity MomentRatio(double p);
};

McReport scalar_identity_check(const ScalarIdentity& id, std::size_t samples, uint64_t seed);

// closed form E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
double normal_abs_moment(double p);

// F = J^{-1/2} sum_j g_j T_{b_j} f with one draw of g_1..g_J
TrigPoly randomized_average(const TrigPoly& f, const TranslationFamily& trans, long J,
                            uint64_t seed);

} // namespace entropylab
