#pragma once

// Sparse trigonometric polynomials on R/Z: finite map frequency -> complex
// coefficient.  Frequencies are arbitrary-precision integers because the
// certificate construction produces n(alpha) with hundreds of digits (or
// hundreds of thousands of bits for the dyadic family).  Every operator we
// need is diagonal in frequency, so norms are exact via Parseval.

#include <complex>
#include <gmpxx.h>
#include <map>

namespace entropylab {

class TrigPoly {
public:
    using Coeffs = std::map<mpz_class, std::complex<double>>;
    static constexpr double kPruneTol = 1e-15;

    TrigPoly() = default;
    explicit TrigPoly(Coeffs c) : c_(std::move(c)) { normalize(); }

    static TrigPoly constant(std::complex<double> v);
    static TrigPoly harmonic(const mpz_class& k, std::complex<double> coeff = 1.0);

    const Coeffs& coeffs() const { return c_; }
    std::complex<double> coeff(const mpz_class& k) const;
    void set_coeff(const mpz_class& k, std::complex<double> v);
    std::size_t support_size() const { return c_.size(); }

    double l2_norm() const;            // sqrt(sum |c_k|^2)
    bool is_real(double tol = 1e-12) const;  // c_{-k} == conj(c_k)

    std::complex<double> eval(double x) const;  // sum c_k e^{2 pi i k x}

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly operator*(double s) const;
    TrigPoly operator*(std::complex<double> s) const;

private:
    void normalize();  // drop coefficients below kPruneTol
    Coeffs c_;
};

TrigPoly multiply(const TrigPoly& f, const TrigPoly& g);  // coefficient convolution

double l2_dist(const TrigPoly& f, const TrigPoly& g);

// frac(k*x) in [0,1), exact: x is the dyadic rational M/2^E, so the product
// reduces to integer arithmetic regardless of how wide k is
double frac_kx(const mpz_class& k, double x);

enum class Part { real, imaginary };
TrigPoly component_part(const TrigPoly& f, Part part);

} // namespace entropylab
