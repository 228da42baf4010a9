#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entropylab/rng.hpp"
#include "entropylab/trigpoly.hpp"

#include <cmath>
#include <complex>

using namespace entropylab;
using cplx = std::complex<double>;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("construction, pruning and coefficient access") {
    TrigPoly f = TrigPoly::harmonic(3, {2.0, -1.0});
    CHECK(f.support_size() == 1);
    CHECK(f.coeff(3) == cplx(2.0, -1.0));
    CHECK(f.coeff(4) == cplx(0.0, 0.0));

    f.set_coeff(5, {1e-20, 0.0});  // below prune tolerance
    CHECK(f.coeff(5) == cplx(0.0, 0.0));
    f.set_coeff(5, {0.5, 0.0});
    CHECK(f.support_size() == 2);
    f.set_coeff(5, {0.0, 0.0});
    CHECK(f.support_size() == 1);

    TrigPoly c = TrigPoly::constant({4.0, 0.0});
    CHECK(c.coeff(0) == cplx(4.0, 0.0));
}

TEST_CASE("Parseval: l2 norm equals quadrature of |f|^2") {
    TrigPoly f;
    f.set_coeff(0, {0.3, 0.0});
    f.set_coeff(1, {1.0, 0.5});
    f.set_coeff(-2, {0.0, -0.7});
    f.set_coeff(7, {0.25, 0.25});

    const int G = 64;  // any grid finer than twice the max frequency is exact
    double acc = 0.0;
    for (int i = 0; i < G; ++i) acc += std::norm(f.eval((i + 0.5) / G));
    CHECK(std::sqrt(acc / G) == doctest::Approx(f.l2_norm()).epsilon(1e-13));

    TrigPoly g;
    g.set_coeff(1, {0.2, 0.0});
    g.set_coeff(3, {0.0, 1.0});
    double d2 = 0.0;
    for (int i = 0; i < G; ++i) d2 += std::norm(f.eval((i + 0.5) / G) - g.eval((i + 0.5) / G));
    CHECK(std::sqrt(d2 / G) == doctest::Approx(l2_dist(f, g)).epsilon(1e-13));
}

TEST_CASE("arithmetic is coefficientwise and multiply is convolution") {
    TrigPoly f = TrigPoly::harmonic(1, 1.0) + TrigPoly::harmonic(-1, 1.0);   // 2 cos
    TrigPoly g = TrigPoly::harmonic(2, {0.0, 3.0});
    TrigPoly h = multiply(f, g);
    CHECK(h.coeff(3) == cplx(0.0, 3.0));
    CHECK(h.coeff(1) == cplx(0.0, 3.0));
    CHECK(h.support_size() == 2);

    TrigPoly s = f * 2.0 - g;
    CHECK(s.coeff(1) == cplx(2.0, 0.0));
    CHECK(s.coeff(2) == cplx(0.0, -3.0));

    // pointwise check of the product
    for (double x : {0.1, 0.37, 0.9}) {
        cplx lhs = h.eval(x);
        cplx rhs = f.eval(x) * g.eval(x);
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("is_real and component_part") {
    TrigPoly f;
    f.set_coeff(2, {1.0, 0.5});
    CHECK_FALSE(f.is_real());
    f.set_coeff(-2, {1.0, -0.5});  // now Hermitian
    CHECK(f.is_real());

    TrigPoly g;
    g.set_coeff(1, {0.0, 1.0});
    g.set_coeff(4, {2.0, -1.0});
    TrigPoly re = component_part(g, Part::real);
    TrigPoly im = component_part(g, Part::imaginary);
    CHECK(re.is_real());
    CHECK(im.is_real());
    for (double x : {0.0, 0.21, 0.68}) {
        cplx v = g.eval(x);
        CHECK(re.eval(x).real() == doctest::Approx(v.real()).epsilon(1e-13));
        CHECK(std::abs(re.eval(x).imag()) < 1e-13);
        CHECK(im.eval(x).real() == doctest::Approx(v.imag()).epsilon(1e-13));
    }
}

TEST_CASE("frac_kx is exact for dyadic x against rational arithmetic") {
    // x = 5/64, k = 123: frac = (123*5 mod 64)/64 = 39/64
    CHECK(frac_kx(123, 5.0 / 64.0) == 39.0 / 64.0);
    // negative k: mpz floor-division convention keeps the result in [0,1)
    CHECK(frac_kx(-1, 5.0 / 64.0) == 59.0 / 64.0);
    CHECK(frac_kx(64, 5.0 / 64.0) == 0.0);
    CHECK(frac_kx(0, 0.123) == 0.0);
    CHECK(frac_kx(7, 0.0) == 0.0);

    // k far wider than any float format: k = 2^400 + 3, x = 2^-10
    mpz_class k = (mpz_class(1) << 400) + 3;
    CHECK(frac_kx(k, std::ldexp(1.0, -10)) == 3.0 / 1024.0);
    // k = 2^400 exactly: product is an integer
    CHECK(frac_kx(mpz_class(1) << 400, std::ldexp(1.0, -10)) == 0.0);
}

TEST_CASE("frac_kx matches direct evaluation for general doubles") {
    RngStream rng(77, 0);
    for (int t = 0; t < 200; ++t) {
        double x = rng.next_uniform();
        long k = static_cast<long>(rng.next_u32() % 100000) - 50000;
        double direct = std::fmod(static_cast<double>(k) * x, 1.0);
        if (direct < 0) direct += 1.0;
        double got = frac_kx(k, x);
        CHECK(got >= 0.0);
        CHECK(got < 1.0);
        // fmod(k*x) incurs one rounding in the product; agreement modulo 1
        double diff = std::fabs(got - direct);
        diff = std::min(diff, 1.0 - diff);
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("unit-circle inequalities behind the separation estimates") {
    // for |a| = |b| = 1: |ab - 1| <= |a - 1| + |b - 1|, and |1 - e(l)| <= 2 pi |l|
    RngStream rng(5, 0);
    for (int t = 0; t < 500; ++t) {
        double u = rng.next_uniform(), v = rng.next_uniform();
        cplx a = std::polar(1.0, kTwoPi * u), b = std::polar(1.0, kTwoPi * v);
        CHECK(std::abs(a * b - 1.0) <= std::abs(a - 1.0) + std::abs(b - 1.0) + 1e-12);
        double lambda = rng.next_uniform() - 0.5;
        CHECK(std::abs(1.0 - std::polar(1.0, kTwoPi * lambda)) <=
              kTwoPi * std::fabs(lambda) + 1e-12);
    }
}
