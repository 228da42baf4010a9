#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace entropylab {

// Translation amounts a_j for the moving average S_n f = (1/n) sum f(x+a_j).
// The shipped families are rational (1/j and 2^-j) and get exact phase
// reduction; explicit families reduce phases in 256-bit floats.
enum class FamilyKind { reciprocal, dyadic, explicit_list };

struct AveragingFamily {
    FamilyKind kind = FamilyKind::reciprocal;
    std::vector<double> values;  // explicit_list only
    long length = 1 << 20;       // J_max

    static AveragingFamily reciprocal(long length = 1 << 20);
    static AveragingFamily dyadic(long length = 4096);
    static AveragingFamily explicit_list(std::vector<double> vals);

    double a(long j) const;  // 1-based

    // frac(a_j * k) in [0,1), exact for the rational kinds
    double phase(long j, const mpz_class& k) const;

    // phase(j, k) for j = 1..maxn in one pass; for the dyadic kind this is the
    // bit recursion ph_j = (ph_{j-1} + bit_{j-1}(k))/2 and costs O(1) per step
    // instead of a wide remainder per step
    std::vector<double> phases_upto(const mpz_class& k, long maxn) const;

    // true if |a_j| <= eps for every j in (from, length]
    bool tail_below(double eps, long from) const;

    std::string id() const;
};

struct TranslationFamily {
    // b_j = (j-1) * w; w irrational as a modeling assumption (finite precision)
    double w = 0.6180339887498948482;  // golden ratio conjugate

    double b(long j) const { return (j - 1) * w; }
};

} // namespace entropylab
