#include "entropylab/families.hpp"

#include "entropylab/trigpoly.hpp"

#include <cmath>

namespace entropylab {

AveragingFamily AveragingFamily::reciprocal(long length) {
    AveragingFamily f;
    f.kind = FamilyKind::reciprocal;
    f.length = length;
    return f;
}

AveragingFamily AveragingFamily::dyadic(long length) {
    AveragingFamily f;
    f.kind = FamilyKind::dyadic;
    f.length = length;
    return f;
}

AveragingFamily AveragingFamily::explicit_list(std::vector<double> vals) {
    AveragingFamily f;
    f.kind = FamilyKind::explicit_list;
    f.length = static_cast<long>(vals.size());
    f.values = std::move(vals);
    for (double v : f.values)
        if (v == 0.0) throw std::invalid_argument("family entries must be nonzero");
    if (f.length == 0) throw std::invalid_argument("empty explicit family");
    return f;
}

double AveragingFamily::a(long j) const {
    if (j < 1 || j > length) throw std::out_of_range("family index out of range");
    switch (kind) {
        case FamilyKind::reciprocal: return 1.0 / static_cast<double>(j);
        case FamilyKind::dyadic: return std::ldexp(1.0, static_cast<int>(-j));
        case FamilyKind::explicit_list: return values[static_cast<std::size_t>(j - 1)];
    }
    return 0.0;
}

double AveragingFamily::phase(long j, const mpz_class& k) const {
    if (j < 1 || j > length) throw std::out_of_range("family index out of range");
    switch (kind) {
        case FamilyKind::reciprocal: {
            // frac(k/j) = (k mod j)/j, exact
            mpz_class r;
            mpz_class jj(j);
            mpz_fdiv_r(r.get_mpz_t(), k.get_mpz_t(), jj.get_mpz_t());
            return r.get_d() / static_cast<double>(j);
        }
        case FamilyKind::dyadic: {
            // frac(k/2^j) = (k mod 2^j)/2^j
            mpz_class r;
            mpz_fdiv_r_2exp(r.get_mpz_t(), k.get_mpz_t(), static_cast<mp_bitcnt_t>(j));
            // top bits suffice; get mantissa and exponent of r, shift by j
            signed long int exp2;
            double mant = mpz_get_d_2exp(&exp2, r.get_mpz_t());
            return std::ldexp(mant, static_cast<int>(exp2 - j));
        }
        case FamilyKind::explicit_list:
            return frac_kx(k, values[static_cast<std::size_t>(j - 1)]);
    }
    return 0.0;
}

std::vector<double> AveragingFamily::phases_upto(const mpz_class& k, long maxn) const {
    if (maxn < 1 || maxn > length) throw std::out_of_range("family index out of range");
    std::vector<double> out(static_cast<std::size_t>(maxn));
    switch (kind) {
        case FamilyKind::reciprocal:
            for (long j = 1; j <= maxn; ++j)
                out[static_cast<std::size_t>(j - 1)] =
                    static_cast<double>(mpz_fdiv_ui(k.get_mpz_t(), static_cast<unsigned long>(j))) /
                    static_cast<double>(j);
            break;
        case FamilyKind::dyadic: {
            const bool neg = sgn(k) < 0;
            const mpz_class ka = abs(k);
            double ph = 0.0;
            for (long j = 1; j <= maxn; ++j) {
                int bit = mpz_tstbit(ka.get_mpz_t(), static_cast<mp_bitcnt_t>(j - 1));
                ph = 0.5 * (ph + bit);
                out[static_cast<std::size_t>(j - 1)] = (neg && ph != 0.0) ? 1.0 - ph : ph;
            }
            break;
        }
        case FamilyKind::explicit_list:
            for (long j = 1; j <= maxn; ++j)
                out[static_cast<std::size_t>(j - 1)] = phase(j, k);
            break;
    }
    return out;
}

bool AveragingFamily::tail_below(double eps, long from) const {
    for (long j = from + 1; j <= length; ++j)
        if (std::fabs(a(j)) > eps) return false;
    return true;
}

std::string AveragingFamily::id() const {
    switch (kind) {
        case FamilyKind::reciprocal: return "reciprocal";
        case FamilyKind::dyadic: return "dyadic";
        case FamilyKind::explicit_list: return "explicit";
    }
    return "?";
}

} // namespace entropylab
