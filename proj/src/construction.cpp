#include "entropylab/construction.hpp"

#include "entropylab/expsum.hpp"
#include "entropylab/rng.hpp"
#include "entropylab/torus_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

namespace entropylab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSafety = 1e-9;  // comparison slack on every verified threshold

inline std::complex<double> cis_frac(double frac) {
    double ph = kTwoPi * frac;
    return {std::cos(ph), std::sin(ph)};
}

inline double dev(std::complex<double> avg) { return std::abs(std::complex<double>(1.0) - avg); }

mpz_class lcm_upto(long n) {
    mpz_class L = 1;
    for (long k = 2; k <= n; ++k) {
        mpz_class kk(k);
        mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), kk.get_mpz_t());
    }
    return L;
}

// residues n mod j for j = 1..J (n >= 0)
std::vector<int64_t> residues_upto(const mpz_class& n, long J) {
    std::vector<int64_t> out(static_cast<std::size_t>(J));
    for (long j = 1; j <= J; ++j)
        out[static_cast<std::size_t>(j - 1)] =
            static_cast<int64_t>(mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(j)));
    return out;
}

double dev_from_residues(const std::vector<int64_t>& res, long J) {
    std::complex<double> s = 0.0;
    for (long j = 1; j <= J; ++j)
        s += cis_frac(static_cast<double>(res[static_cast<std::size_t>(j - 1)]) /
                      static_cast<double>(j));
    return dev(s / static_cast<double>(J));
}

// work accounting: every curve evaluation charges its term count here, so the
// infeasible regimes fail in bounded time instead of spinning
struct WorkMeter {
    uint64_t used = 0;
    uint64_t cap;
    explicit WorkMeter(uint64_t c) : cap(c) {}
    void charge(uint64_t terms, int stage, double best_partial) {
        used += terms;
        if (used > cap)
            throw BudgetExhausted("search work budget exhausted at stage " + std::to_string(stage) +
                                      " (" + std::to_string(cap) +
                                      " exponential-sum terms); best alpha=1 margin so far " +
                                      std::to_string(best_partial),
                                  stage, best_partial);
    }
};

// beta(n, J) at sorted checkpoints for the reciprocal family; n >= 0.
// int64-sized n goes through the fast expsum kernels; anything wider than a
// machine word is astronomically larger than any reachable J, so every phase
// is a plain residue and the direct loop is exact.
std::vector<std::complex<double>> recip_betas(const mpz_class& n, const std::vector<long>& cps) {
    if (n.fits_slong_p()) return recip_betas_scalar(n.get_si(), cps);
    std::vector<std::complex<double>> out;
    out.reserve(cps.size());
    std::size_t ci = 0;
    std::complex<double> acc = 0.0;
    for (long j = 1; j <= cps.back(); ++j) {
        auto res = mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(j));
        acc += cis_frac(static_cast<double>(res) / static_cast<double>(j));
        while (ci < cps.size() && cps[ci] == j) {
            out.push_back(acc / static_cast<double>(j));
            ++ci;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// stage search, reciprocal family (a_j = 1/j)
//
// Candidate multipliers are exact multiples m_s = e * lcm(1..J_{s-1}).  Every
// phase at j <= J_{s-1} then vanishes identically, so adding m_s changes no
// already-verified condition at the earlier scales, and the conditions at J_s
// reduce to loudness of m_s + (old subset sums).  Two regimes cover the
// reachable space: while lcm(1..J_{s-1}) is small, e is scanned so that
// m_s / J_s lands in the empirically loud band ~[0.036, 0.07]; once the lcm
// dwarfs J_s, e in {1,2,3} is already loud because most j in (J_{s-1}, J_s]
// carry a prime power above J_{s-1} and the residues decorrelate.
//
// A forward screen rejects stage-s multipliers that could never become quiet
// again at a feasible J_{s+1} (deviation must fall below ~0.078 by 15 J_s).
// For this family that screen is where deep recursions die: a multiplier
// divisible by lcm(1..J_{s-1}) is loud at *every* later scale reachable by
// iteration, so stages past the third exhaust their budget honestly.
// ---------------------------------------------------------------------------

Certificate search_reciprocal(const AveragingFamily& family, int r, const SearchLimits& limits) {
    Certificate cert;
    cert.r = r;
    cert.family_id = family.id();
    cert.seed = limits.seed;
    WorkMeter meter(limits.max_work);

    // stage 1: smallest J_1 with a strongly deviating m_1.  (J_1 = 1 is dead
    // for a_1 = 1: every phase is integral.)  J_1 = 2, m_1 = 1 gives beta = 0.
    {
        bool found = false;
        for (long J1 = 1; J1 <= 64 && !found; ++J1) {
            for (long m1 = 1; m1 <= 128 && !found; ++m1) {
                std::complex<double> s = 0.0;
                for (long j = 1; j <= J1; ++j)
                    s += cis_frac(static_cast<double>(m1 % j) / static_cast<double>(j));
                if (dev(s / static_cast<double>(J1)) > std::max(0.9, limits.target_one)) {
                    cert.J.push_back(J1);
                    cert.m.push_back(m1);
                    found = true;
                }
            }
        }
        if (!found) throw BudgetExhausted("stage 1 search failed", 1, 0.0);
    }

    const double fw_quiet = 0.078;        // forward screen threshold at 15..30 J_s
    const long Jmax = std::min(limits.max_J, family.length);

    for (int s = 2; s <= r; ++s) {
        const long Jprev = cert.J.back();
        const mpz_class L = lcm_upto(Jprev);
        if (limits.enforce_tail_gate) {
            // the proof's gate J_s > L_s with sup_{j > L_s/100} a_j <= (400 pi M_s)^{-1};
            // for a_j = 1/j that is J_s > 125664 * sum |m_t|
            mpz_class M = 0;
            for (const auto& mm : cert.m) M += abs(mm);
            if (M * 125664 > Jmax)
                throw BudgetExhausted("tail gate L_s exceeds max_J at stage " + std::to_string(s),
                                      s, 0.0);
        }
        std::vector<mpz_class> subset_sums{0};
        for (const auto& mm : cert.m) {
            std::size_t n = subset_sums.size();
            for (std::size_t i = 0; i < n; ++i) subset_sums.push_back(subset_sums[i] + mm);
        }
        const std::vector<long> early(cert.J.begin(), cert.J.end());

        double best_partial = 0.0;
        int structured_fw_strikes = 0;  // huge-lcm candidates failing the forward screen
        bool done = false;
        for (long Jc = std::max(Jprev * 5, Jprev + 8); !done;
             Jc = static_cast<long>(Jc * 1.15) + 1) {
            if (Jc > Jmax)
                throw BudgetExhausted(
                    "certificate search budget exhausted at stage " + std::to_string(s) +
                        " (J would exceed " + std::to_string(Jmax) +
                        "); best alpha=1 margin so far " + std::to_string(best_partial),
                    s, best_partial);

            // gate: every old nonzero subset must already be quiet at Jc
            bool quiet = true;
            for (std::size_t T = 1; T < subset_sums.size() && quiet; ++T) {
                meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                auto b = recip_betas(subset_sums[T], {Jc});
                if (dev(b[0]) >= limits.target_zero) quiet = false;
            }
            if (!quiet) continue;

            // candidate multipliers, exact multiples of L
            std::vector<mpz_class> cands;
            const bool structured = (L > Jc / 16);
            if (structured) {
                if (structured_fw_strikes >= 3 && s < r) continue;  // provably hopeless, skip
                for (long e = 1; e <= 3; ++e) cands.push_back(e * L);
            } else {
                for (double kappa : {0.036, 0.040, 0.044, 0.048, 0.053, 0.058, 0.064, 0.070}) {
                    mpz_class e(std::max(1.0, std::floor(kappa * static_cast<double>(Jc) /
                                                         L.get_d() + 0.5)));
                    mpz_class m = e * L;
                    if (cands.empty() || cands.back() != m) cands.push_back(m);
                }
            }

            for (const mpz_class& m : cands) {
                // earlier-scale screen: the exact-multiple structure makes these
                // identities, but they are still checked numerically
                bool ok = true;
                double own_worst = std::numeric_limits<double>::infinity();
                for (std::size_t T = 0; T < subset_sums.size() && ok; ++T) {
                    mpz_class n = m + subset_sums[T];
                    meter.charge(static_cast<uint64_t>(Jprev), s, best_partial);
                    auto be = recip_betas(n, early);
                    for (int u = 0; u + 1 < s && ok; ++u) {
                        double d = dev(be[static_cast<std::size_t>(u)]);
                        if ((T >> u) & 1u) ok = d > 0.505;
                        else ok = d < 0.098;
                    }
                    if (!ok) break;
                    meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                    auto bo = recip_betas(n, {Jc});
                    own_worst = std::min(own_worst, dev(bo[0]));
                    ok = own_worst > limits.target_one;
                }
                if (!ok) {
                    if (own_worst < std::numeric_limits<double>::infinity())
                        best_partial = std::max(best_partial, own_worst);
                    continue;
                }
                best_partial = std::max(best_partial, own_worst);
                if (s < r) {
                    // forward screen: m must be quiet again by the next stage's
                    // earliest feasible scale
                    std::vector<long> fw;
                    for (long g : {15, 18, 22, 30})
                        if (g * Jc <= family.length) fw.push_back(g * Jc);
                    if (!fw.empty()) {
                        meter.charge(static_cast<uint64_t>(fw.back()), s, best_partial);
                        auto bf = recip_betas(m, fw);
                        bool fq = true;
                        for (auto& b : bf) fq = fq && dev(b) < fw_quiet;
                        if (!fq) {
                            if (structured) ++structured_fw_strikes;
                            continue;
                        }
                    }
                }
                cert.J.push_back(Jc);
                cert.m.push_back(m);
                done = true;
                break;
            }
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// stage search, dyadic family (a_j = 2^-j): phases are the binary expansion of
// m_s below bit j, so the window is steered bit by bit.
// ---------------------------------------------------------------------------

Certificate search_dyadic(const AveragingFamily& family, int r, const SearchLimits& limits) {
    Certificate cert;
    cert.r = r;
    cert.family_id = family.id();
    cert.seed = limits.seed;
    cert.J.push_back(1);
    cert.m.push_back(1);  // phase 1/2 at j=1: |1-(-1)| = 2
    WorkMeter meter(limits.max_work);
    const long Jmax = std::min(limits.max_J, family.length);

    for (int s = 2; s <= r; ++s) {
        long Jprev = cert.J.back();
        std::vector<mpz_class> subset_sums{0};
        for (const auto& mm : cert.m) {
            std::size_t n = subset_sums.size();
            for (std::size_t i = 0; i < n; ++i) subset_sums.push_back(subset_sums[i] + mm);
        }
        double best_partial = 0.0;
        long Jc = Jprev * 4 + 8;
        bool done = false;
        while (!done) {
            if (Jc > Jmax)
                throw BudgetExhausted("dyadic search budget exhausted at stage " + std::to_string(s) +
                                          "; best alpha=1 margin so far " +
                                          std::to_string(best_partial),
                                      s, best_partial);
            // old subsets must be quiet at Jc
            bool quiet = true;
            std::vector<std::vector<double>> oph;
            oph.reserve(subset_sums.size());
            for (std::size_t T = 0; T < subset_sums.size(); ++T) {
                meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                oph.push_back(family.phases_upto(subset_sums[T], Jc));
                if (T > 0) {
                    std::complex<double> acc = 0.0;
                    for (double ph : oph.back()) acc += cis_frac(ph);
                    if (dev(acc / static_cast<double>(Jc)) >= limits.target_zero) quiet = false;
                }
            }
            if (!quiet) { Jc = static_cast<long>(Jc * 1.3) + 2; continue; }

            // Candidate m_s: bits in a window (b0, Jc] with spacing k, so the
            // phases below b0 vanish (the old scales see nothing) and the
            // phases inside the window are loud.  A loud stage freezes a
            // deviation deficit whose real part Sum(1 - cos) can never cancel
            // at later scales, so the scan prefers the candidate with the
            // least deviation above the acceptance bar: overshooting here is
            // what blows up J_{s+1}.
            auto eval_worst = [&](const mpz_class& cand, double floor_) {
                std::vector<double> cph = family.phases_upto(cand, Jc);
                double w = std::numeric_limits<double>::infinity();
                for (std::size_t T = 0; T < subset_sums.size(); ++T) {
                    meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                    std::complex<double> acc = 0.0;
                    const double* op = oph[T].data();
                    for (long j = 0; j < Jc; ++j) {
                        double ph = op[j] + cph[static_cast<std::size_t>(j)];
                        if (ph >= 1.0) ph -= 1.0;
                        acc += cis_frac(ph);
                    }
                    w = std::min(w, dev(acc / static_cast<double>(Jc)));
                    if (w <= floor_) break;
                }
                return w;
            };
            const double accept = limits.target_one;
            mpz_class best_m = 0;
            double best_w = 0.0;
            for (double frac : {0.56, 0.60, 0.65, 0.72, 0.80, 0.90, 1.00}) {
                long b0 = Jc - static_cast<long>(frac * static_cast<double>(Jc - Jprev));
                if (b0 < Jprev) b0 = Jprev;
                for (long k : {4, 3, 5, 2, 6}) {
                    mpz_class cand = 0;
                    for (long b = b0; b < Jc; b += k)
                        mpz_setbit(cand.get_mpz_t(), static_cast<mp_bitcnt_t>(b));
                    if (cand == 0) continue;
                    double w = eval_worst(cand, best_w > accept ? accept : best_w);
                    best_partial = std::max(best_partial, w);
                    if (w > accept && (best_w <= accept || w < best_w)) {
                        best_w = w;
                        best_m = cand;
                    }
                }
                if (best_w > accept + 0.015) break;  // close to the bar; stop widening
            }
            if (best_w > accept) {
                cert.J.push_back(Jc);
                cert.m.push_back(best_m);
                done = true;
            } else {
                Jc = static_cast<long>(Jc * 1.3) + 2;
            }
        }
    }
    return cert;
}

// generic bounded random search for explicit families; honest budget errors
Certificate search_generic(const AveragingFamily& family, int r, const SearchLimits& limits) {
    RngStream rng(limits.seed, 0x6E6E71C);
    Certificate cert;
    cert.r = r;
    cert.family_id = family.id();
    cert.seed = limits.seed;
    double best_partial = 0.0;
    WorkMeter meter(limits.max_work);
    for (int s = 1; s <= r; ++s) {
        std::vector<mpz_class> subset_sums{0};
        for (const auto& mm : cert.m) {
            std::size_t n = subset_sums.size();
            for (std::size_t i = 0; i < n; ++i) subset_sums.push_back(subset_sums[i] + mm);
        }
        long Jprev = cert.J.empty() ? 0 : cert.J.back();
        long Jc = std::max<long>(Jprev * 4, 4);
        bool done = false;
        while (!done) {
            if (Jc > std::min<long>(limits.max_J, family.length))
                throw BudgetExhausted("generic search budget exhausted at stage " + std::to_string(s) +
                                          "; best alpha=1 margin " + std::to_string(best_partial),
                                      s, best_partial);
            bool quiet = true;
            for (std::size_t T = 1; T < subset_sums.size(); ++T) {
                meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                std::complex<double> acc = 0.0;
                for (long j = 1; j <= Jc; ++j) acc += cis_frac(family.phase(j, subset_sums[T]));
                if (dev(acc / static_cast<double>(Jc)) >= limits.target_zero) quiet = false;
            }
            if (!quiet) { Jc = static_cast<long>(Jc * 1.3) + 2; continue; }
            for (int tries = 0; tries < 4000 && !done; ++tries) {
                mpz_class cand = static_cast<long>(rng.next_u32() % 1000000u + 1);
                double w = std::numeric_limits<double>::infinity();
                for (std::size_t T = 0; T < subset_sums.size() && w > limits.target_one; ++T) {
                    meter.charge(static_cast<uint64_t>(Jc), s, best_partial);
                    std::complex<double> acc = 0.0;
                    for (long j = 1; j <= Jc; ++j) {
                        mpz_class n = subset_sums[T] + cand;
                        acc += cis_frac(family.phase(j, n));
                    }
                    w = std::min(w, dev(acc / static_cast<double>(Jc)));
                }
                best_partial = std::max(best_partial, w);
                if (w > limits.target_one) {
                    cert.J.push_back(Jc);
                    cert.m.push_back(cand);
                    done = true;
                }
            }
            if (!done) Jc = static_cast<long>(Jc * 1.3) + 2;
        }
    }
    return cert;
}

} // namespace

AlphaVector AlphaVector::from_mask(uint32_t mask, int r) {
    AlphaVector a;
    a.bits.resize(static_cast<std::size_t>(r));
    for (int s = 0; s < r; ++s) a.bits[static_cast<std::size_t>(s)] = (mask >> s) & 1u;
    return a;
}

uint32_t AlphaVector::mask() const {
    uint32_t m = 0;
    for (std::size_t s = 0; s < bits.size(); ++s)
        if (bits[s]) m |= (1u << s);
    return m;
}

mpz_class Certificate::n_of(uint32_t alpha_mask) const {
    mpz_class n = 0;
    for (int s = 0; s < r; ++s)
        if ((alpha_mask >> s) & 1u) n += m[static_cast<std::size_t>(s)];
    return n;
}

Certificate find_certificate(const AveragingFamily& family, int r, const SearchLimits& limits) {
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    if (!family.tail_below(1.0, 0))
        throw std::invalid_argument("family entries must be bounded");  // paranoia only
    Certificate cert;
    switch (family.kind) {
        case FamilyKind::reciprocal: cert = search_reciprocal(family, r, limits); break;
        case FamilyKind::dyadic: cert = search_dyadic(family, r, limits); break;
        case FamilyKind::explicit_list: cert = search_generic(family, r, limits); break;
    }
    // never return an unverified certificate
    VerifyMode vm = (r <= max_full_r_from_env()) ? VerifyMode::Full()
                                                 : VerifyMode::Sampled(4096, limits.seed);
    VerifyReport rep = verify_certificate(cert, family, vm);
    if (!rep.ok)
        throw BudgetExhausted("search produced a certificate that fails verification: " + rep.failure,
                              r, rep.worst_one_case);
    cert.verified_mode = rep.mode;
    cert.worst_zero_case = rep.worst_zero_case;
    cert.worst_one_case = rep.worst_one_case;
    cert.stage_margins = rep.per_stage;
    return cert;
}

VerifyReport verify_certificate(const Certificate& cert, const AveragingFamily& family,
                                const VerifyMode& mode, int max_full_r) {
    VerifyReport rep;
    const int r = cert.r;
    if (r < 1 || cert.J.size() != static_cast<std::size_t>(r) ||
        cert.m.size() != static_cast<std::size_t>(r))
        throw std::invalid_argument("malformed certificate");
    for (int s = 1; s < r; ++s)
        if (cert.J[static_cast<std::size_t>(s)] <= cert.J[static_cast<std::size_t>(s - 1)])
            throw std::invalid_argument("J not strictly increasing");
    if (mode.full && r > max_full_r)
        throw std::invalid_argument("full verification of r=" + std::to_string(r) +
                                    " exceeds cap (ENTROPYLAB_MAX_FULL_R=" +
                                    std::to_string(max_full_r) + ")");
    const long Jr = cert.J.back();
    if (Jr > family.length) throw std::out_of_range("J_r exceeds family length");

    rep.per_stage.assign(static_cast<std::size_t>(r), StageMargin{});
    for (int s = 0; s < r; ++s) rep.per_stage[static_cast<std::size_t>(s)].J = cert.J[static_cast<std::size_t>(s)];
    rep.mode = mode.full ? "full" : "sampled";

    std::vector<uint32_t> masks;
    if (mode.full) {
        masks.resize(std::size_t{1} << r);
        std::iota(masks.begin(), masks.end(), 0u);
    } else {
        RngStream rng(mode.seed, 0x5A4D);
        masks.push_back(0);
        masks.push_back((r >= 32) ? ~0u : ((1u << r) - 1));
        for (std::size_t i = 0; i < mode.sample_count; ++i)
            masks.push_back(rng.next_u32() & ((r >= 32) ? ~0u : ((1u << r) - 1)));
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    }

    // fast path: reciprocal certificates whose combined frequencies fit a
    // machine word go through the incremental-rotation expsum kernels; this is
    // what keeps full 2^r verification at J_r in the millions cheap.  Wider
    // frequencies (or other families) fall back to per-stage phase tables.
    const bool exact_residues = family.kind == FamilyKind::reciprocal;
    bool fast = exact_residues;
    std::vector<int64_t> ns64;
    if (fast) {
        ns64.reserve(masks.size());
        for (uint32_t mask : masks) {
            mpz_class n = cert.n_of(mask);
            if (sgn(n) < 0 || !n.fits_slong_p()) { fast = false; break; }
            ns64.push_back(n.get_si());
        }
    }
    std::vector<std::vector<int64_t>> rtab;
    std::vector<std::vector<double>> ptab;
    if (!fast) {
        if (static_cast<double>(Jr) * r > 2e8)
            throw std::invalid_argument("verification instance too large for the table path");
        if (exact_residues) {
            for (int t = 0; t < r; ++t)
                rtab.push_back(residues_upto(cert.m[static_cast<std::size_t>(t)], Jr));
        } else {
            for (int t = 0; t < r; ++t)
                ptab.push_back(family.phases_upto(cert.m[static_cast<std::size_t>(t)], Jr));
        }
    }

    rep.ok = true;
    const std::size_t kChunk = 1024;
    std::vector<std::complex<double>> beta(static_cast<std::size_t>(r));
    for (std::size_t lo = 0; lo < masks.size(); lo += kChunk) {
        const std::size_t hi = std::min(masks.size(), lo + kChunk);
        std::vector<std::vector<std::complex<double>>> batch;
        if (fast) {
            std::vector<int64_t> chunk(ns64.begin() + static_cast<std::ptrdiff_t>(lo),
                                       ns64.begin() + static_cast<std::ptrdiff_t>(hi));
            batch = recip_betas_batch(chunk, cert.J);
        }
        for (std::size_t mi = lo; mi < hi; ++mi) {
        const uint32_t mask = masks[mi];
        int s = 0;
        if (fast) {
            for (s = 0; s < r; ++s)
                beta[static_cast<std::size_t>(s)] = batch[mi - lo][static_cast<std::size_t>(s)];
        } else {
            std::complex<double> acc = 0.0;
            for (long j = 1; j <= Jr; ++j) {
                double frac;
                if (exact_residues) {
                    int64_t sum = 0;
                    for (int t = 0; t < r; ++t)
                        if ((mask >> t) & 1u) sum += rtab[static_cast<std::size_t>(t)][static_cast<std::size_t>(j - 1)];
                    frac = static_cast<double>(sum % j) / static_cast<double>(j);
                } else {
                    double ph = 0.0;
                    for (int t = 0; t < r; ++t)
                        if ((mask >> t) & 1u) ph += ptab[static_cast<std::size_t>(t)][static_cast<std::size_t>(j - 1)];
                    frac = ph - std::floor(ph);
                }
                acc += cis_frac(frac);
                while (s < r && j == cert.J[static_cast<std::size_t>(s)]) {
                    beta[static_cast<std::size_t>(s)] = acc / static_cast<double>(j);
                    ++s;
                }
            }
        }
        for (s = 0; s < r; ++s) {
            double d = dev(beta[static_cast<std::size_t>(s)]);
            auto& m = rep.per_stage[static_cast<std::size_t>(s)];
            bool one = (mask >> s) & 1u;
            if (one) {
                m.worst_one = std::min(m.worst_one, d);
                if (mask == (1u << s)) m.pure_dev = d;
                if (d <= 0.5 + kSafety) {
                    rep.ok = false;
                    if (rep.failure.empty())
                        rep.failure = "alpha=1 case below 1/2: alpha mask " + std::to_string(mask) +
                                      ", s=" + std::to_string(s + 1) + ", dev=" + std::to_string(d);
                }
            } else {
                m.worst_zero = std::max(m.worst_zero, d);
                if (d >= 0.1 - kSafety) {
                    rep.ok = false;
                    if (rep.failure.empty())
                        rep.failure = "alpha=0 case above 1/10: alpha mask " + std::to_string(mask) +
                                      ", s=" + std::to_string(s + 1) + ", dev=" + std::to_string(d);
                }
            }
        }
        // consequence check feeding acceptance: multiplier gap > 2/5 whenever
        // alpha_s != alpha_t
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b)
                if (((mask >> a) & 1u) != ((mask >> b) & 1u))
                    rep.min_pairwise_gap = std::min(
                        rep.min_pairwise_gap,
                        std::abs(beta[static_cast<std::size_t>(a)] - beta[static_cast<std::size_t>(b)]));
        }
    }

    // injectivity of alpha -> n(alpha) over the checked vectors
    {
        std::vector<mpz_class> ns;
        ns.reserve(masks.size());
        for (uint32_t mask : masks) ns.push_back(cert.n_of(mask));
        std::sort(ns.begin(), ns.end());
        rep.injective = std::adjacent_find(ns.begin(), ns.end()) == ns.end();
        if (!rep.injective) {
            rep.ok = false;
            if (rep.failure.empty()) rep.failure = "n(alpha) not injective";
        }
    }

    for (const auto& m : rep.per_stage) {
        rep.worst_zero_case = std::max(rep.worst_zero_case, m.worst_zero);
        rep.worst_one_case = std::min(rep.worst_one_case, m.worst_one);
    }
    return rep;
}

TrigPoly build_g(const Certificate& cert) {
    if (!cert.verified()) throw std::invalid_argument("refusing to build g from unverified certificate");
    const double coeff = std::pow(2.0, -0.5 * cert.r);
    TrigPoly::Coeffs c;
    for (uint32_t mask = 0; mask < (1u << cert.r); ++mask) c[cert.n_of(mask)] += coeff;
    TrigPoly g{std::move(c)};
    if (g.support_size() != (std::size_t{1} << cert.r))
        throw std::runtime_error("frequency collision in g (injectivity violated)");
    return g;
}

FinitePseudoMetric separation_matrix(const Certificate& cert, const TrigPoly& g,
                                     const AveragingFamily& family) {
    FinitePseudoMetric metric = orbit_metric(g, family, cert.J);
    const double floor = (2.0 / 5.0) / std::sqrt(2.0) - 1e-9;
    for (std::size_t s = 0; s < metric.size(); ++s)
        for (std::size_t t = s + 1; t < metric.size(); ++t) {
            double d = metric.dist(s, t);
            if (d <= 0.2 || d < floor)
                throw std::runtime_error(
                    "internal-consistency fault: ||S_{J_s}g - S_{J_t}g|| = " + std::to_string(d) +
                    " at (" + std::to_string(s) + "," + std::to_string(t) + ")");
        }
    return metric;
}

SeparatedFamily select_subfamily(const std::vector<TrigPoly>& functions, double alpha_gap,
                                 int r0) {
    if (r0 < 1) throw std::invalid_argument("r0 must be >= 1");
    const std::size_t r = functions.size();
    if (r != static_cast<std::size_t>(4 * r0 * r0 + 2 * r0))
        throw std::invalid_argument("subfamily selection needs exactly r = 4 r0^2 + 2 r0 inputs");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (l2_dist(functions[i], functions[j]) <= alpha_gap)
                throw std::invalid_argument("pairwise-gap precondition violated");

    const double need = alpha_gap / 4.0;
    for (Part part : {Part::real, Part::imaginary}) {
        std::vector<TrigPoly> parts;
        parts.reserve(r);
        for (const auto& f : functions) parts.push_back(component_part(f, part));
        std::vector<std::vector<double>> D(r, std::vector<double>(r, 0.0));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) D[i][j] = D[j][i] = l2_dist(parts[i], parts[j]);
        // lexicographically first r0-subset with pairwise gaps > need and
        // nonvanishing members
        std::vector<int> pick;
        std::function<bool(std::size_t)> rec = [&](std::size_t from) {
            if (pick.size() == static_cast<std::size_t>(r0)) return true;
            for (std::size_t i = from; i < r; ++i) {
                if (parts[i].l2_norm() <= 1e-12) continue;
                bool ok = true;
                for (int p : pick)
                    if (D[static_cast<std::size_t>(p)][i] <= need) { ok = false; break; }
                if (!ok) continue;
                pick.push_back(static_cast<int>(i));
                if (rec(i + 1)) return true;
                pick.pop_back();
            }
            return false;
        };
        if (rec(0)) {
            SeparatedFamily out;
            out.part = part;
            out.indices = pick;
            double mg = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < pick.size(); ++a) {
                out.functions.push_back(parts[static_cast<std::size_t>(pick[a])]);
                for (std::size_t b = a + 1; b < pick.size(); ++b)
                    mg = std::min(mg, D[static_cast<std::size_t>(pick[a])][static_cast<std::size_t>(pick[b])]);
            }
            out.min_gap = mg;
            return out;
        }
    }
    throw std::runtime_error("subfamily selection failed (should be impossible for valid inputs)");
}

CounterexampleResult assemble_counterexample(const AveragingFamily& family, int r0,
                                             const SearchLimits& limits) {
    if (r0 < 1) throw std::invalid_argument("r0 must be >= 1");
    const int r = 4 * r0 * r0 + 2 * r0;
    CounterexampleResult out;
    out.cert = find_certificate(family, r, limits);
    TrigPoly g = build_g(out.cert);
    separation_matrix(out.cert, g, family);  // separation-floor assertion

    std::vector<TrigPoly> hs;
    hs.reserve(static_cast<std::size_t>(r));
    for (long Js : out.cert.J) hs.push_back(apply_S(g, family, Js));
    out.witness = select_subfamily(hs, 1.0 / 5.0, r0);
    out.f = component_part(g, out.witness.part);

    for (int idx : out.witness.indices)
        out.witness_J.push_back(out.cert.J[static_cast<std::size_t>(idx)]);

    // the packing certificate: N_f(1/40) >= r0
    FinitePseudoMetric orbit = orbit_metric(out.f, family, out.witness_J);
    if (packing_number(orbit, 1.0 / 40.0, Mode::exact) < static_cast<std::size_t>(r0))
        throw std::runtime_error("internal-consistency fault: packing at 1/40 below r0");

    double sup = 0.0;
    const int grid = 512;
    for (int i = 0; i < grid; ++i)
        sup = std::max(sup, std::abs(out.f.eval((i + 0.5) / grid)));
    out.sup_norm_grid = sup;
    return out;
}

} // namespace entropylab
