#include "entropylab/trigpoly.hpp"

#include <cmath>

namespace entropylab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

// A double is the dyadic rational M/2^E, so k*x reduces to ((k*M) mod 2^E)/2^E
// in integers; any float-based product would spend all its precision on the
// integer part once k outgrows the mantissa.
double frac_kx(const mpz_class& k, double x) {
    if (x == 0.0) return 0.0;
    int e2;
    double mant = std::frexp(x, &e2);                       // x = mant * 2^e2
    auto M = static_cast<long>(std::ldexp(mant, 53));       // 53-bit integer
    long E = 53 - e2;                                       // x = M / 2^E
    if (E <= 0) return 0.0;                                 // k*x is an integer
    mpz_class t = k * M;
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(E));
    signed long rex;
    double rmant = mpz_get_d_2exp(&rex, r.get_mpz_t());     // r >= 0 (floor division)
    double fr = std::ldexp(rmant, static_cast<int>(rex - E));
    if (fr >= 1.0) fr = 0.0;  // guard against rounding up to exactly 1
    return fr;
}

TrigPoly TrigPoly::constant(std::complex<double> v) {
    Coeffs c;
    c[mpz_class(0)] = v;
    return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::harmonic(const mpz_class& k, std::complex<double> coeff) {
    Coeffs c;
    c[k] = coeff;
    return TrigPoly(std::move(c));
}

std::complex<double> TrigPoly::coeff(const mpz_class& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? std::complex<double>(0.0) : it->second;
}

void TrigPoly::set_coeff(const mpz_class& k, std::complex<double> v) {
    if (std::abs(v) < kPruneTol) c_.erase(k);
    else c_[k] = v;
}

void TrigPoly::normalize() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (std::abs(it->second) < kPruneTol) it = c_.erase(it);
        else ++it;
    }
}

double TrigPoly::l2_norm() const {
    double s = 0.0;
    for (const auto& [k, v] : c_) s += std::norm(v);
    return std::sqrt(s);
}

bool TrigPoly::is_real(double tol) const {
    for (const auto& [k, v] : c_) {
        mpz_class mk = -k;
        if (std::abs(coeff(mk) - std::conj(v)) > tol) return false;
    }
    return true;
}

std::complex<double> TrigPoly::eval(double x) const {
    std::complex<double> s = 0.0;
    for (const auto& [k, v] : c_) {
        double ph = kTwoPi * frac_kx(k, x);
        s += v * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return s;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    Coeffs c = c_;
    for (const auto& [k, v] : o.c_) c[k] += v;
    return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const {
    Coeffs c = c_;
    for (const auto& [k, v] : o.c_) c[k] -= v;
    return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::operator*(double s) const { return (*this) * std::complex<double>(s); }

TrigPoly TrigPoly::operator*(std::complex<double> s) const {
    Coeffs c = c_;
    for (auto& [k, v] : c) v *= s;
    return TrigPoly(std::move(c));
}

TrigPoly multiply(const TrigPoly& f, const TrigPoly& g) {
    TrigPoly::Coeffs c;
    for (const auto& [kf, vf] : f.coeffs())
        for (const auto& [kg, vg] : g.coeffs()) c[kf + kg] += vf * vg;
    return TrigPoly(std::move(c));
}

double l2_dist(const TrigPoly& f, const TrigPoly& g) { return (f - g).l2_norm(); }

TrigPoly component_part(const TrigPoly& f, Part part) {
    // the output support is the union of the input support and its negation
    TrigPoly::Coeffs sym;
    for (const auto& [k, v] : f.coeffs()) {
        sym[k] = v;
        sym.try_emplace(mpz_class(-k), 0.0);
    }
    TrigPoly::Coeffs c;
    for (const auto& [k, v] : sym) {
        mpz_class mk = -k;
        std::complex<double> vm = std::conj(f.coeff(mk));
        std::complex<double> out = (part == Part::real)
                                       ? (v + vm) * 0.5
                                       : (v - vm) / std::complex<double>(0.0, 2.0);
        c[k] = out;
    }
    return TrigPoly(std::move(c));
}

} // namespace entropylab
