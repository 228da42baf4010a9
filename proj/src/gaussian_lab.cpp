#include "entropylab/gaussian_lab.hpp"

#include "entropylab/kernels.hpp"
#include "entropylab/rng.hpp"
#include "entropylab/torus_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entropylab {

void GaussianFamily::check() const {
    if (A.empty() || A.front().empty()) throw std::invalid_argument("empty Gaussian family");
    for (const auto& row : A) {
        if (row.size() != A.front().size()) throw std::invalid_argument("ragged matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
    }
}

double GaussianFamily::variance(std::size_t n) const {
    double s = 0.0;
    for (double v : A.at(n)) s += v * v;
    return s;
}

void McReport::judge_one_sided() {
    if (!bound) { verdict = Verdict::pass; return; }
    if (estimate + 3.0 * std_error <= *bound) verdict = Verdict::pass;
    else if (estimate - 3.0 * std_error > *bound) verdict = Verdict::fail;
    else verdict = Verdict::inconclusive;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

FinitePseudoMetric exact_metric(const GaussianFamily& fam) {
    fam.check();
    const std::size_t N = fam.N(), J = fam.J();
    std::vector<std::vector<double>> d(N, std::vector<double>(N, 0.0));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = a + 1; b < N; ++b)
            d[a][b] = d[b][a] =
                std::sqrt(kernels::sumsq_diff(fam.A[a].data(), fam.A[b].data(), J));
    std::vector<std::string> labels;
    for (std::size_t n = 0; n < N; ++n) labels.push_back("row" + std::to_string(n));
    return FinitePseudoMetric::validate(std::move(d), std::move(labels));
}

namespace {

// flattened row-major copy for the kernels
std::vector<double> flatten(const GaussianFamily& fam) {
    std::vector<double> flat;
    flat.reserve(fam.N() * fam.J());
    for (const auto& row : fam.A) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

std::vector<double> sample_sups(const GaussianFamily& fam, std::size_t samples, uint64_t seed) {
    fam.check();
    const std::size_t N = fam.N(), J = fam.J();
    std::vector<double> flat = flatten(fam);
    std::vector<double> g(J), out(N), sups(samples);
    RngStream rng(seed, 0);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < J; ++j) g[j] = rng.next_normal();
        kernels::gemv(flat.data(), N, J, g.data(), out.data());
        sups[i] = kernels::sup_abs(out.data(), N);
    }
    return sups;
}

void mean_se(const std::vector<double>& v, double& mean, double& se) {
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v) q += (x - mean) * (x - mean);
    se = v.size() > 1 ? std::sqrt(q / (static_cast<double>(v.size() - 1) * v.size())) : 0.0;
}

} // namespace

McReport simulate_sup(const GaussianFamily& fam, std::size_t samples, uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("samples must be >= 100");
    auto sups = sample_sups(fam, samples, seed);
    McReport rep;
    rep.samples = samples;
    mean_se(sups, rep.estimate, rep.std_error);
    return rep;
}

McReport fernique_check(const GaussianFamily& fam, std::size_t samples, uint64_t seed) {
    if (samples < 10000) throw std::invalid_argument("samples must be >= 10^4");
    auto sups = sample_sups(fam, samples, seed);
    McReport rep;
    rep.samples = samples;
    mean_se(sups, rep.estimate, rep.std_error);
    // smallest empirical s with P(sup <= s) >= 1/2
    std::vector<double> sorted = sups;
    std::sort(sorted.begin(), sorted.end());
    double sstar = sorted[(samples + 1) / 2 - 1];
    rep.bound = 6.0 * sstar;
    rep.note = "s*=" + std::to_string(sstar);
    rep.judge_one_sided();
    return rep;
}

SudakovReport sudakov_ratio(const GaussianFamily& fam, const std::vector<double>& deltas,
                            std::size_t samples, uint64_t seed) {
    for (double d : deltas)
        if (d <= 0.0) throw std::invalid_argument("deltas must be positive");
    SudakovReport out;
    FinitePseudoMetric metric = exact_metric(fam);
    out.greedy_covering = metric.size() > kDefaultExactCap;
    Mode mode = out.greedy_covering ? Mode::greedy : Mode::exact;
    double best_num = 0.0;
    for (double d : deltas) {
        std::size_t cov = covering_number(metric, d, mode);
        double num = d * std::sqrt(std::log(static_cast<double>(cov)));
        out.detail.push_back({d, cov, num});
        best_num = std::max(best_num, num);
    }
    out.sup_report = simulate_sup(fam, samples, seed);
    out.ratio = out.sup_report.estimate > 0.0 ? best_num / out.sup_report.estimate : 0.0;
    return out;
}

McReport rotation_test(const GaussianFamily& fam, double theta, std::size_t samples,
                       uint64_t seed) {
    if (samples < 10000) throw std::invalid_argument("samples must be >= 10^4");
    fam.check();
    const std::size_t N = fam.N(), J = fam.J();
    std::vector<double> flat = flatten(fam);
    const double st = std::sin(theta), ct = std::cos(theta);
    const std::size_t M = 2 * N;
    // accumulate per-entry mean and variance of p_ab - q_ab where p is the
    // product of original pair entries and q of the rotated pair
    std::vector<double> sum(M * M, 0.0), sumsq(M * M, 0.0);
    std::vector<double> g(J), h(J), Gn(N), Hn(N), x(M), y(M);
    RngStream rng(seed, 1);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < J; ++j) g[j] = rng.next_normal();
        for (std::size_t j = 0; j < J; ++j) h[j] = rng.next_normal();
        kernels::gemv(flat.data(), N, J, g.data(), Gn.data());
        kernels::gemv(flat.data(), N, J, h.data(), Hn.data());
        for (std::size_t n = 0; n < N; ++n) {
            x[n] = Gn[n];
            x[N + n] = Hn[n];
            y[n] = Gn[n] * st + Hn[n] * ct;
            y[N + n] = Gn[n] * ct - Hn[n] * st;
        }
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = a; b < M; ++b) {
                double diff = x[a] * x[b] - y[a] * y[b];
                sum[a * M + b] += diff;
                sumsq[a * M + b] += diff * diff;
            }
    }
    // Bonferroni-corrected threshold: z such that ntests two-sided tests have
    // a combined false-alarm probability of about 1e-3 (a bare 3-SE cut fails
    // spuriously once M^2/2 entries are in play)
    const double ntests = static_cast<double>(M * (M + 1) / 2);
    const double tail = 1e-3 / ntests;
    double zlo = 3.0, zhi = 10.0;
    for (int it = 0; it < 60; ++it) {
        double zm = 0.5 * (zlo + zhi);
        (std::erfc(zm / std::sqrt(2.0)) > tail ? zlo : zhi) = zm;
    }
    const double zcrit = 0.5 * (zlo + zhi);
    McReport rep;
    rep.samples = samples;
    bool ok = true;
    double worst_ratio = 0.0, worst_mean = 0.0, worst_se = 0.0;
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = a; b < M; ++b) {
            double mean = sum[a * M + b] / static_cast<double>(samples);
            double var = sumsq[a * M + b] / static_cast<double>(samples) - mean * mean;
            double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
            double ratio = std::fabs(mean) / (zcrit * se + 1e-12);
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_mean = std::fabs(mean);
                worst_se = se;
            }
            if (std::fabs(mean) > zcrit * se + 1e-12) ok = false;
        }
    rep.estimate = worst_mean;
    rep.std_error = worst_se;
    rep.bound = zcrit * worst_se + 1e-12;
    rep.note = "max entrywise covariance gap vs Bonferroni z";
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

ScalarIdentity ScalarIdentity::Mgf(double lambda, double sigma) {
    ScalarIdentity s;
    s.kind = Kind::mgf;
    s.lambda = lambda;
    s.sigma = sigma;
    return s;
}
ScalarIdentity ScalarIdentity::TailIntegral() {
    ScalarIdentity s;
    s.kind = Kind::tail_integral;
    return s;
}
ScalarIdentity ScalarIdentity::MomentRatio(double p) {
    ScalarIdentity s;
    s.kind = Kind::moment_ratio;
    s.p = p;
    return s;
}

double normal_abs_moment(double p) {
    return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI);
}

McReport scalar_identity_check(const ScalarIdentity& id, std::size_t samples, uint64_t seed) {
    if (samples < 10000) throw std::invalid_argument("samples must be >= 10^4");
    McReport rep;
    rep.samples = samples;
    RngStream rng(seed, 2);
    switch (id.kind) {
        case ScalarIdentity::Kind::mgf: {
            if (id.lambda * id.sigma > 3.0)
                throw std::invalid_argument("lambda*sigma > 3: MGF estimator variance explodes");
            std::vector<double> v(samples);
            for (auto& x : v) x = std::exp(id.lambda * id.sigma * rng.next_normal());
            mean_se(v, rep.estimate, rep.std_error);
            double target = std::exp(0.5 * id.lambda * id.lambda * id.sigma * id.sigma);
            rep.bound = target;
            rep.note = "two-sided vs exp(lambda^2 sigma^2 / 2)";
            rep.verdict = std::fabs(rep.estimate - target) <= 3.0 * rep.std_error
                              ? Verdict::pass
                              : Verdict::fail;
            break;
        }
        case ScalarIdentity::Kind::tail_integral: {
            // E|g| = int_0^inf P(|g|>t) dt and E g^2 = 2 int_0^inf t P(|g|>t) dt,
            // checked per sample against the discretized tail integrals so the
            // comparison is a genuine quadrature, not an algebraic identity
            const double dt = 0.01, tmax = 9.0;
            std::vector<double> d1(samples), d2(samples);
            for (std::size_t i = 0; i < samples; ++i) {
                double a = std::fabs(rng.next_normal());
                double capped = std::min(a, tmax);
                // sum over grid t_k = (k+1/2) dt below |g|
                double nfull = std::floor(capped / dt);
                double q1 = nfull * dt;                     // ~ int 1{|g|>t} dt
                double q2 = 2.0 * (dt * dt) * (nfull * nfull) / 2.0;  // ~ 2 int t.. dt
                d1[i] = a - q1;
                d2[i] = a * a - q2;
            }
            double m1, s1, m2, s2;
            mean_se(d1, m1, s1);
            mean_se(d2, m2, s2);
            // quadrature bias is O(dt) for the first and O(dt E|g|) for the second
            bool ok1 = std::fabs(m1) <= 3.0 * s1 + dt;
            bool ok2 = std::fabs(m2) <= 3.0 * s2 + 2.0 * dt;
            rep.estimate = std::fabs(m1);
            rep.std_error = s1;
            rep.bound = 3.0 * s1 + dt;
            rep.note = "second-moment variant diff " + std::to_string(m2);
            rep.verdict = (ok1 && ok2) ? Verdict::pass : Verdict::fail;
            break;
        }
        case ScalarIdentity::Kind::moment_ratio: {
            if (id.p < 1.0 || id.p > 8.0) throw std::invalid_argument("p must be in [1, 8]");
            std::vector<double> vp(samples), v2(samples);
            for (std::size_t i = 0; i < samples; ++i) {
                double a = std::fabs(rng.next_normal());
                vp[i] = std::pow(a, id.p);
                v2[i] = a * a;
            }
            double mp, sp, m2, s2;
            mean_se(vp, mp, sp);
            mean_se(v2, m2, s2);
            double ratio = std::pow(mp, 1.0 / id.p) / std::sqrt(m2);
            double target = std::pow(normal_abs_moment(id.p), 1.0 / id.p);
            // delta-method SE, covariance between the two moments ignored
            // (conservative enough at these sample sizes)
            double dp = std::pow(mp, 1.0 / id.p - 1.0) / id.p / std::sqrt(m2) * sp;
            double d2 = 0.5 * std::pow(mp, 1.0 / id.p) * std::pow(m2, -1.5) * s2;
            double se = std::sqrt(dp * dp + d2 * d2);
            rep.estimate = ratio;
            rep.std_error = se;
            rep.bound = target;
            rep.note = "two-sided vs (E|Z|^p)^{1/p}/sqrt(E Z^2)";
            rep.verdict = std::fabs(ratio - target) <= std::max(3.0 * se, 0.01 * target)
                              ? Verdict::pass
                              : Verdict::fail;
            break;
        }
    }
    return rep;
}

TrigPoly randomized_average(const TrigPoly& f, const TranslationFamily& trans, long J,
                            uint64_t seed) {
    if (J < 1) throw std::invalid_argument("J must be >= 1");
    RngStream rng(seed, 3);
    TrigPoly F;
    const double scale = 1.0 / std::sqrt(static_cast<double>(J));
    for (long j = 1; j <= J; ++j) {
        double gj = rng.next_normal();
        F = F + apply_T(f, trans.b(j)) * (gj * scale);
    }
    return F;
}

} // namespace entropylab
