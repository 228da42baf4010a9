#include "entropylab/torus_ops.hpp"

#include <cmath>

namespace entropylab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::complex<double> unit_phase(double frac) {
    double ph = kTwoPi * frac;
    return {std::cos(ph), std::sin(ph)};
}
} // namespace

std::complex<double> multiplier_avg(const AveragingFamily& family, long n, const mpz_class& k) {
    if (n < 1 || n > family.length) throw std::out_of_range("n exceeds family length");
    std::complex<double> s = 0.0;
    for (double ph : family.phases_upto(k, n)) s += unit_phase(ph);
    return s / static_cast<double>(n);
}

std::vector<std::complex<double>> multiplier_prefix(const AveragingFamily& family, long maxn,
                                                    const mpz_class& k) {
    if (maxn < 1 || maxn > family.length) throw std::out_of_range("n exceeds family length");
    std::vector<double> ph = family.phases_upto(k, maxn);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(maxn));
    std::complex<double> s = 0.0;
    for (long j = 1; j <= maxn; ++j) {
        s += unit_phase(ph[static_cast<std::size_t>(j - 1)]);
        out[static_cast<std::size_t>(j - 1)] = s / static_cast<double>(j);
    }
    return out;
}

TrigPoly apply_S(const TrigPoly& f, const AveragingFamily& family, long n) {
    TrigPoly::Coeffs c;
    for (const auto& [k, v] : f.coeffs()) c[k] = v * multiplier_avg(family, n, k);
    return TrigPoly(std::move(c));
}

TrigPoly apply_T(const TrigPoly& f, double b) {
    TrigPoly::Coeffs c;
    for (const auto& [k, v] : f.coeffs()) c[k] = v * unit_phase(frac_kx(k, b));
    return TrigPoly(std::move(c));
}

FinitePseudoMetric orbit_metric(const TrigPoly& f, const AveragingFamily& family,
                                const std::vector<long>& ns) {
    const std::size_t m = ns.size();
    long maxn = 1;
    for (long n : ns) {
        if (n < 1 || n > family.length) throw std::out_of_range("n exceeds family length");
        maxn = std::max(maxn, n);
    }
    // beta(n, k) for every requested n in one prefix pass per frequency
    std::vector<std::vector<std::complex<double>>> beta(m);
    for (auto& row : beta) row.reserve(f.coeffs().size());
    for (const auto& [k, v] : f.coeffs()) {
        auto pre = multiplier_prefix(family, maxn, k);
        for (std::size_t i = 0; i < m; ++i)
            beta[i].push_back(pre[static_cast<std::size_t>(ns[i] - 1)]);
    }
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double s = 0.0;
            std::size_t idx = 0;
            for (const auto& [k, v] : f.coeffs()) {
                s += std::norm((beta[i][idx] - beta[j][idx]) * v);
                ++idx;
            }
            d[i][j] = d[j][i] = std::sqrt(s);
        }
    std::vector<std::string> labels;
    labels.reserve(m);
    for (long n : ns) labels.push_back("n=" + std::to_string(n));
    return FinitePseudoMetric::validate(std::move(d), std::move(labels));
}

TrigPoly cesaro_T_average(const TrigPoly& f, const TranslationFamily& trans, long J) {
    if (J < 1) throw std::invalid_argument("J must be >= 1");
    TrigPoly::Coeffs c;
    for (const auto& [k, v] : f.coeffs()) {
        // (1/J) sum_j e^{2 pi i k (j-1) w}; summed term by term (the geometric
        // closed form is what the tests check against)
        double step = frac_kx(k, trans.w);
        std::complex<double> s = 0.0;
        double cur = 0.0;
        for (long j = 0; j < J; ++j) {
            s += unit_phase(cur);
            cur += step;
            if (cur >= 1.0) cur -= 1.0;
        }
        c[k] = v * s / static_cast<double>(J);
    }
    return TrigPoly(std::move(c));
}

} // namespace entropylab
