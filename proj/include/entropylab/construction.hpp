#pragma once

#include "entropylab/families.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/trigpoly.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entropylab {

struct AlphaVector {
    std::vector<uint8_t> bits;  // length r, entries 0/1

    static AlphaVector from_mask(uint32_t mask, int r);
    uint32_t mask() const;
};

// Per-stage extremes of the verified deviations |1 - beta_{s,alpha}|.
struct StageMargin {
    long J = 0;
    double worst_zero = 0.0;  // max deviation over alpha with alpha_s = 0 (want < 1/10)
    double worst_one = 2.0;   // min deviation over alpha with alpha_s = 1 (want > 1/2)
    double pure_dev = 0.0;    // deviation of m_s alone at J_s (the proof's (ii) quantity)
};

struct Certificate {
    int r = 0;
    std::vector<long> J;       // strictly increasing
    std::vector<mpz_class> m;  // m_1..m_r
    std::string family_id;
    uint64_t seed = 0;

    // filled in by verification
    std::string verified_mode;  // "", "full" or "sampled"
    double worst_zero_case = 0.0;
    double worst_one_case = 2.0;
    std::vector<StageMargin> stage_margins;

    mpz_class n_of(uint32_t alpha_mask) const;
    bool verified() const { return !verified_mode.empty(); }
};

struct SearchLimits {
    long max_J = 1000000;        // budget: certificate search fails past this
    uint64_t max_work = 4000000000ull;  // total exponential-sum terms before giving up
    uint64_t seed = 1;
    double target_zero = 0.085;  // search-time safety threshold (verify needs < 0.1)
    double target_one = 0.53;    // search-time safety threshold (verify needs > 0.5)
    bool enforce_tail_gate = false;  // the proof's J_s > L_s gate; see README
};

struct BudgetExhausted : std::runtime_error {
    BudgetExhausted(const std::string& what, int reached_stage, double best_margin)
        : std::runtime_error(what), stage(reached_stage), best_partial_margin(best_margin) {}
    int stage;
    double best_partial_margin;
};

struct VerifyMode {
    bool full = true;
    std::size_t sample_count = 4096;
    uint64_t seed = 0;
    static VerifyMode Full() { return {true, 0, 0}; }
    static VerifyMode Sampled(std::size_t count, uint64_t seed) { return {false, count, seed}; }
};

struct VerifyReport {
    bool ok = false;
    bool injective = false;
    std::string mode;
    double worst_zero_case = 0.0;
    double worst_one_case = 2.0;
    // min over checked (alpha, s != t, alpha_s != alpha_t) of |beta_s - beta_t|;
    // the separation chain needs > 2/5
    double min_pairwise_gap = 2.0;
    std::vector<StageMargin> per_stage;
    std::string failure;  // human-readable offending case, empty when ok
};

inline int max_full_r_from_env() {
    if (const char* e = std::getenv("ENTROPYLAB_MAX_FULL_R")) return std::atoi(e);
    return 22;
}

Certificate find_certificate(const AveragingFamily& family, int r, const SearchLimits& limits = {});

VerifyReport verify_certificate(const Certificate& cert, const AveragingFamily& family,
                                const VerifyMode& mode = VerifyMode::Full(),
                                int max_full_r = max_full_r_from_env());

// g = 2^{-r/2} sum_alpha e^{2 pi i n(alpha) x}; refuses unverified certificates
TrigPoly build_g(const Certificate& cert);

// pseudo-metric over J_1..J_r with dist[s][t] = ||S_{J_s} g - S_{J_t} g||_2;
// asserts every off-diagonal entry > 1/5 and >= (2/5)/sqrt(2) - 1e-9
FinitePseudoMetric separation_matrix(const Certificate& cert, const TrigPoly& g,
                                     const AveragingFamily& family);

struct SeparatedFamily {
    Part part = Part::real;
    std::vector<int> indices;        // into the input function list, |I| = r0
    std::vector<TrigPoly> functions; // the selected part-polynomials
    double min_gap = 0.0;            // smallest pairwise L2 distance (r0 = 1: +inf conv.: 0)
};

// Subfamily selection: requires r = 4 r0^2 + 2 r0 inputs with pairwise full
// distances > alpha_gap; returns r0 of them whose Re or Im parts stay
// pairwise > alpha_gap / 4 apart.  Deterministic (lexicographically first).
SeparatedFamily select_subfamily(const std::vector<TrigPoly>& functions, double alpha_gap,
                                 int r0);

struct CounterexampleResult {
    TrigPoly f;
    SeparatedFamily witness;
    Certificate cert;
    std::vector<long> witness_J;  // the J_s values behind witness.indices
    double sup_norm_grid;         // max |f| on a sampling grid (reported, not asserted)
};

CounterexampleResult assemble_counterexample(const AveragingFamily& family, int r0,
                                             const SearchLimits& limits = {});

} // namespace entropylab
