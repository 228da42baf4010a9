// Acceptance gate: one line of output per criterion, [PASS] or [FAIL], with
// wall time.  The process exits nonzero if any criterion fails, so ctest
// reports the gate honestly.  Criteria 1 and 2 are known-red: the reciprocal
// family admits no r >= 4 certificate at reachable scale and no family
// reaches r = 20 (see README, "Which searches can succeed"); the search
// detects this and stops within its budget instead of looping forever.

#include "entropylab/construction.hpp"
#include "entropylab/gaussian_lab.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/rng.hpp"
#include "entropylab/torus_ops.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace entropylab;

namespace {

int failures = 0;

void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d (%s) — %.2fs%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                secs, detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

GaussianFamily random_family(std::size_t N, std::size_t J, uint64_t seed) {
    RngStream rng(seed, 0);
    GaussianFamily fam;
    fam.A.assign(N, std::vector<double>(J));
    for (auto& row : fam.A)
        for (double& v : row) v = rng.next_normal();
    return fam;
}

bool thresholds_hold(const Certificate& c, std::string& detail) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "worst_zero=%.6f worst_one=%.6f", c.worst_zero_case,
                  c.worst_one_case);
    detail = buf;
    return c.verified_mode == "full" && c.worst_zero_case < 0.1 - 1e-9 &&
           c.worst_one_case > 0.5 + 1e-9;
}

} // namespace

int main() {
    criterion(1, "reciprocal r0=1 certificate, full 2^6 verification, < 10 s", [](std::string& d) {
        auto t0 = std::chrono::steady_clock::now();
        auto fam = AveragingFamily::reciprocal();
        try {
            Certificate c = find_certificate(fam, 6, SearchLimits{});
            if (!thresholds_hold(c, d)) return false;
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() <
                   10.0;
        } catch (const BudgetExhausted& e) {
            d = std::string(e.what()) +
                " [expected: stages >= 4 need m ~ lcm(1..J_2), so J_4 ~ 10^150 terms]";
            return false;
        }
    });

    criterion(2, "r0=2 certificate (r=20), full 2^20 verification, < 10 min", [](std::string& d) {
        // try both shipped families; each must either deliver or stop honestly
        for (const auto& fam :
             {AveragingFamily::reciprocal(), AveragingFamily::dyadic(1 << 20)}) {
            try {
                Certificate c = find_certificate(fam, 20, SearchLimits{});
                if (thresholds_hold(c, d)) return true;
            } catch (const BudgetExhausted& e) {
                d += fam.id() + ": " + e.what() + "; ";
            }
        }
        d += "[expected: deviation growth forces J_20 >~ 10^16 for every family]";
        return false;
    });

    criterion(3, "multiplier gap > 2/5 and separation floor (2/5)/sqrt(2)", [](std::string& d) {
        auto fam = AveragingFamily::dyadic(1 << 20);
        Certificate cert = find_certificate(fam, 6, SearchLimits{});
        VerifyReport rep = verify_certificate(cert, fam, VerifyMode::Full());
        if (!rep.ok || rep.min_pairwise_gap <= 2.0 / 5.0) {
            d = "pairwise beta gap " + std::to_string(rep.min_pairwise_gap);
            return false;
        }
        TrigPoly g = build_g(cert);
        FinitePseudoMetric sep = separation_matrix(cert, g, fam);
        double lo = 1e9;
        for (std::size_t i = 0; i < sep.size(); ++i)
            for (std::size_t j = i + 1; j < sep.size(); ++j) lo = std::min(lo, sep.dist(i, j));
        char buf[128];
        std::snprintf(buf, sizeof buf, "beta gap %.4f, min separation %.4f (floor %.4f)",
                      rep.min_pairwise_gap, lo, (2.0 / 5.0) / std::sqrt(2.0));
        d = buf;
        return lo >= (2.0 / 5.0) / std::sqrt(2.0) - 1e-9;
    });

    criterion(4, "Fernique bound E sup <= 6 s* across 20 random families", [](std::string& d) {
        for (uint64_t i = 0; i < 20; ++i) {
            auto fam = random_family(3 + i % 8, 2 + (i * 5) % 12, 100 + i);
            McReport rep = fernique_check(fam, 100000, 100 + i);
            if (rep.verdict != Verdict::pass) {
                d = "family " + std::to_string(i) + " " + to_string(rep.verdict);
                return false;
            }
        }
        d = "20/20 within bound";
        return true;
    });

    criterion(5, "scalar Gaussian identities (mgf, tail integral, moment ratio)",
              [](std::string& d) {
                  const ScalarIdentity ids[] = {
                      ScalarIdentity::Mgf(0.8, 1.0), ScalarIdentity::Mgf(1.5, 0.5),
                      ScalarIdentity::TailIntegral(), ScalarIdentity::MomentRatio(4.0),
                      ScalarIdentity::MomentRatio(3.0)};
                  int n = 0;
                  for (const auto& id : ids) {
                      McReport rep = scalar_identity_check(id, 200000, 500 + n++);
                      if (rep.verdict != Verdict::pass) {
                          d = "identity " + std::to_string(n - 1) + " " + to_string(rep.verdict);
                          return false;
                      }
                  }
                  d = "5/5 identities";
                  return true;
              });

    criterion(6, "rotation invariance of joint Gaussian laws", [](std::string& d) {
        for (uint64_t i = 0; i < 8; ++i) {
            auto fam = random_family(4 + i % 6, 3 + i % 7, 700 + i);
            McReport rep = rotation_test(fam, 0.4 + 0.15 * static_cast<double>(i), 100000, 700 + i);
            if (rep.verdict != Verdict::pass) {
                d = "family " + std::to_string(i) + " " + to_string(rep.verdict);
                return false;
            }
        }
        d = "8/8 invariant";
        return true;
    });

    criterion(7, "greedy vs exact covering/packing agreement up to 12 points",
              [](std::string& d) {
                  int checked = 0;
                  for (uint64_t seed = 1; seed <= 10; ++seed) {
                      RngStream rng(seed, 3);
                      std::size_t n = 5 + seed % 8;
                      std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
                      std::vector<std::pair<double, double>> pts(n);
                      for (auto& p : pts) p = {rng.next_uniform(), rng.next_uniform()};
                      for (std::size_t i = 0; i < n; ++i)
                          for (std::size_t j = 0; j < n; ++j)
                              mat[i][j] = std::hypot(pts[i].first - pts[j].first,
                                                     pts[i].second - pts[j].second);
                      auto m = FinitePseudoMetric::validate(std::move(mat));
                      for (double delta : {0.1, 0.25, 0.5, 0.9}) {
                          std::size_t ce = covering_number(m, delta, Mode::exact);
                          std::size_t cg = covering_number(m, delta, Mode::greedy);
                          std::size_t pe = packing_number(m, delta, Mode::exact);
                          std::size_t pg = packing_number(m, delta, Mode::greedy);
                          // greedy must bracket exact and the standard chain must hold
                          if (cg < ce || pg > pe || ce > pe) {
                              d = "violation at seed " + std::to_string(seed);
                              return false;
                          }
                          ++checked;
                      }
                  }
                  d = std::to_string(checked) + " instances consistent";
                  return true;
              });

    criterion(8, "operator algebra identities to 1e-12", [](std::string& d) {
        auto fam = AveragingFamily::reciprocal(64);
        TrigPoly f;
        f.set_coeff(1, {1.0, 0.0});
        f.set_coeff(-4, {0.0, 0.5});
        f.set_coeff(9, {0.25, -0.75});
        double worst = 0.0;
        // S_n is the diagonal multiplier operator
        for (long n : {1L, 3L, 10L, 32L}) {
            TrigPoly sf = apply_S(f, fam, n);
            for (const auto& [k, c] : f.coeffs())
                worst = std::max(worst, std::abs(sf.coeff(k) - c * multiplier_avg(fam, n, k)));
        }
        // T is an isometry and S, T commute
        double b = 0.377;
        worst = std::max(worst, std::fabs(apply_T(f, b).l2_norm() - f.l2_norm()));
        TrigPoly st = apply_S(apply_T(f, b), fam, 10);
        TrigPoly ts = apply_T(apply_S(f, fam, 10), b);
        worst = std::max(worst, l2_dist(st, ts));
        // T_b1 T_b2 = T_{b1+b2}
        worst = std::max(worst, l2_dist(apply_T(apply_T(f, 0.2), 0.3), apply_T(f, 0.5)));
        char buf[64];
        std::snprintf(buf, sizeof buf, "max residual %.2e", worst);
        d = buf;
        return worst < 1e-12;
    });

    criterion(9, "Sudakov ratio <= 6 across random families", [](std::string& d) {
        std::vector<double> deltas{2.0, 1.4, 1.0, 0.7, 0.5, 0.35, 0.2};
        double worst = 0.0;
        for (uint64_t i = 0; i < 10; ++i) {
            auto fam = random_family(6 + i % 5, 4 + i % 6, 900 + i);
            SudakovReport rep = sudakov_ratio(fam, deltas, 100000, 900 + i);
            worst = std::max(worst, rep.ratio);
            if (rep.ratio > 6.0) {
                d = "family " + std::to_string(i) + " ratio " + std::to_string(rep.ratio);
                return false;
            }
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "worst ratio %.3f", worst);
        d = buf;
        return true;
    });

    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
