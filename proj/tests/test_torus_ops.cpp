#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entropylab/torus_ops.hpp"

#include <cmath>
#include <complex>

using namespace entropylab;
using cplx = std::complex<double>;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// textbook multiplier: direct sum with long-double phases
cplx beta_direct(const AveragingFamily& fam, long n, long k) {
    std::complex<long double> acc = 0.0L;
    for (long j = 1; j <= n; ++j) {
        long double ph = std::fmod(static_cast<long double>(fam.a(j)) * k, 1.0L);
        acc += std::polar(1.0L, static_cast<long double>(kTwoPi) * ph);
    }
    acc /= static_cast<long double>(n);
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

} // namespace

TEST_CASE("multiplier_avg matches the direct sum for all shipped families") {
    auto rec = AveragingFamily::reciprocal(128);
    auto dya = AveragingFamily::dyadic(64);
    auto exp = AveragingFamily::explicit_list({0.1, 0.25, 0.375, 0.5, 0.625});
    for (long k : {1L, 2L, 7L, 60L, 991L}) {
        for (long n : {1L, 2L, 5L, 30L, 64L}) {
            CAPTURE(k);
            CAPTURE(n);
            CHECK(std::abs(multiplier_avg(rec, n, k) - beta_direct(rec, n, k)) < 1e-12);
            CHECK(std::abs(multiplier_avg(dya, n, k) - beta_direct(dya, n, k)) < 1e-12);
            if (n <= 5) CHECK(std::abs(multiplier_avg(exp, n, k) - beta_direct(exp, n, k)) < 1e-12);
        }
    }
}

TEST_CASE("hand values of the multiplier") {
    auto rec = AveragingFamily::reciprocal(16);
    // k = 1: phases are frac(1/j); j = 1 gives 0
    CHECK(std::abs(multiplier_avg(rec, 1, 1) - cplx(1.0, 0.0)) < 1e-15);
    // n = 2, k = 1: (e(0) + e(1/2))/2 = 0
    CHECK(std::abs(multiplier_avg(rec, 2, 1)) < 1e-15);
    // any n, k = 0: beta = 1
    CHECK(std::abs(multiplier_avg(rec, 7, 0) - cplx(1.0, 0.0)) < 1e-15);
    // dyadic, k = 2^j multiple of every 2^j' in range: j = 1..n phases frac(2^{j'-j}...)
    auto dya = AveragingFamily::dyadic(32);
    CHECK(std::abs(multiplier_avg(dya, 3, 8) - cplx(1.0, 0.0)) < 1e-15);  // 8 * 2^-j integral, j<=3
}

TEST_CASE("multiplier_prefix agrees with multiplier_avg at every prefix") {
    auto fam = AveragingFamily::reciprocal(256);
    mpz_class k = mpz_class("123456789123456789");
    auto pre = multiplier_prefix(fam, 200, k);
    REQUIRE(pre.size() == 200);
    for (long n : {1L, 3L, 17L, 100L, 200L})
        CHECK(std::abs(pre[n - 1] - multiplier_avg(fam, n, k)) < 1e-12);
}

TEST_CASE("apply_S is the diagonal operator and averages pointwise") {
    auto fam = AveragingFamily::reciprocal(64);
    TrigPoly f;
    f.set_coeff(1, {1.0, 0.0});
    f.set_coeff(-3, {0.0, 2.0});
    f.set_coeff(10, {0.5, -0.5});
    long n = 7;
    TrigPoly sf = apply_S(f, fam, n);
    // coefficientwise
    for (const auto& [k, c] : f.coeffs())
        CHECK(std::abs(sf.coeff(k) - c * multiplier_avg(fam, n, k)) < 1e-13);
    // pointwise: S_n f(x) = (1/n) sum_j f(x + a_j)
    for (double x : {0.05, 0.42, 0.77}) {
        cplx avg = 0.0;
        for (long j = 1; j <= n; ++j) avg += f.eval(x + fam.a(j));
        avg /= static_cast<double>(n);
        CHECK(std::abs(sf.eval(x) - avg) < 1e-12);
    }
}

TEST_CASE("apply_T translates, is an isometry, and composes additively") {
    TrigPoly f;
    f.set_coeff(2, {1.0, 1.0});
    f.set_coeff(-5, {0.3, 0.0});
    double b1 = 0.31, b2 = 0.47;
    TrigPoly t1 = apply_T(f, b1);
    CHECK(t1.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-14));
    for (double x : {0.0, 0.2, 0.9})
        CHECK(std::abs(t1.eval(x) - f.eval(x + b1)) < 1e-12);
    TrigPoly t12 = apply_T(t1, b2);
    TrigPoly direct = apply_T(f, b1 + b2);
    for (const auto& [k, c] : t12.coeffs())
        CHECK(std::abs(c - direct.coeff(k)) < 1e-12);
}

TEST_CASE("orbit_metric equals pairwise l2 distances of S_n f") {
    auto fam = AveragingFamily::dyadic(64);
    TrigPoly f;
    f.set_coeff(1, {1.0, 0.0});
    f.set_coeff(5, {0.0, -1.0});
    f.set_coeff(12, {0.5, 0.5});
    std::vector<long> ns{1, 2, 4, 9, 20};
    FinitePseudoMetric m = orbit_metric(f, fam, ns);
    REQUIRE(m.size() == ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = 0; j < ns.size(); ++j) {
            double want = l2_dist(apply_S(f, fam, ns[i]), apply_S(f, fam, ns[j]));
            CHECK(m.dist(i, j) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("cesaro_T_average has the closed-form Dirichlet coefficient") {
    TranslationFamily trans;
    TrigPoly f = TrigPoly::harmonic(3, {1.0, 0.0});
    long J = 40;
    TrigPoly avg = cesaro_T_average(f, trans, J);
    // (1/J) sum_{j=0}^{J-1} e(3 j w) = e^{i pi 3 (J-1) w} sin(pi 3 J w)/(J sin(pi 3 w))
    double kw = 3.0 * trans.w;
    double mag = std::fabs(std::sin(M_PI * kw * J) / (J * std::sin(M_PI * kw)));
    CHECK(std::abs(avg.coeff(3)) == doctest::Approx(mag).epsilon(1e-9));
    // k = 0 passes through untouched
    TrigPoly c = TrigPoly::constant({2.0, 0.0});
    CHECK(std::abs(cesaro_T_average(c, trans, J).coeff(0) - cplx(2.0, 0.0)) < 1e-13);
    // nonzero frequencies decay ~ 1/J for irrational w (equidistribution)
    TrigPoly avg2 = cesaro_T_average(f, trans, 4000);
    CHECK(std::abs(avg2.coeff(3)) < 0.01);
}

TEST_CASE("operator algebra: S and T commute, both are linear") {
    auto fam = AveragingFamily::reciprocal(32);
    TrigPoly f;
    f.set_coeff(2, {1.0, -0.5});
    f.set_coeff(-7, {0.25, 0.0});
    double b = 0.3779;
    long n = 9;
    TrigPoly st = apply_S(apply_T(f, b), fam, n);
    TrigPoly ts = apply_T(apply_S(f, fam, n), b);
    for (const auto& [k, c] : st.coeffs()) CHECK(std::abs(c - ts.coeff(k)) < 1e-12);

    TrigPoly g = TrigPoly::harmonic(2, {0.0, 1.0});
    TrigPoly lin = apply_S(f + g * 2.0, fam, n) - (apply_S(f, fam, n) + apply_S(g, fam, n) * 2.0);
    CHECK(lin.l2_norm() < 1e-12);
}
