#include "entropylab/pseudometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entropylab {

FinitePseudoMetric FinitePseudoMetric::validate(std::vector<std::vector<double>> matrix,
                                                std::vector<std::string> labels) {
    const std::size_t n = matrix.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    for (const auto& row : matrix)
        if (row.size() != n) throw std::invalid_argument("matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(matrix[i][j])) throw std::invalid_argument("non-finite entry");
            if (matrix[i][j] < 0) throw std::invalid_argument("negative distance");
        }
    for (std::size_t i = 0; i < n; ++i)
        if (matrix[i][i] != 0.0) throw std::invalid_argument("nonzero diagonal");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (matrix[i][j] != matrix[j][i]) throw std::invalid_argument("asymmetric matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (matrix[i][k] > matrix[i][j] + matrix[j][k] + kTriangleTol)
                    throw std::invalid_argument("triangle inequality violated");
    if (!labels.empty() && labels.size() != n)
        throw std::invalid_argument("label count mismatch");
    return FinitePseudoMetric(std::move(matrix), std::move(labels));
}

double FinitePseudoMetric::diameter() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) m = std::max(m, d_[i][j]);
    return m;
}

namespace {

// closed-ball membership masks: ball[c] = set of points within delta of c
std::vector<uint64_t> ball_masks(const FinitePseudoMetric& s, double delta) {
    const std::size_t n = s.size();
    std::vector<uint64_t> balls(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t p = 0; p < n; ++p)
            if (s.dist(c, p) <= delta) balls[c] |= (uint64_t{1} << p);
    return balls;
}

std::size_t greedy_cover(const std::vector<uint64_t>& balls, uint64_t universe) {
    uint64_t covered = 0;
    std::size_t count = 0;
    while (covered != universe) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < balls.size(); ++c) {
            int gain = __builtin_popcountll(balls[c] & ~covered);
            if (gain > best_gain) { best_gain = gain; best = c; }
        }
        covered |= balls[best];
        ++count;
    }
    return count;
}

// branch and bound exact minimum set cover
void bb_cover(const std::vector<uint64_t>& balls, uint64_t universe, uint64_t covered,
              std::size_t used, std::size_t& best) {
    if (used >= best) return;
    if (covered == universe) { best = used; return; }
    // cheap lower bound: remaining / max ball size
    int remaining = __builtin_popcountll(universe & ~covered);
    int maxball = 0;
    for (uint64_t b : balls) maxball = std::max(maxball, __builtin_popcountll(b & ~covered));
    if (used + (remaining + maxball - 1) / maxball >= best) return;
    // branch on the uncovered point contained in fewest balls
    std::size_t pick = 64;
    int fewest = std::numeric_limits<int>::max();
    uint64_t todo = universe & ~covered;
    for (std::size_t p = 0; p < 64; ++p) {
        if (!(todo & (uint64_t{1} << p))) continue;
        int cnt = 0;
        for (uint64_t b : balls)
            if (b & (uint64_t{1} << p)) ++cnt;
        if (cnt < fewest) { fewest = cnt; pick = p; }
    }
    for (std::size_t c = 0; c < balls.size(); ++c)
        if (balls[c] & (uint64_t{1} << pick))
            bb_cover(balls, universe, covered | balls[c], used + 1, best);
}

// exact max "packing" = max clique in the graph with edges dist > delta
void bb_clique(const std::vector<uint64_t>& adj, uint64_t cand, std::size_t cur,
               std::size_t& best) {
    if (cur + static_cast<std::size_t>(__builtin_popcountll(cand)) <= best) return;
    if (!cand) { best = std::max(best, cur); return; }
    while (cand) {
        if (cur + static_cast<std::size_t>(__builtin_popcountll(cand)) <= best) return;
        std::size_t v = static_cast<std::size_t>(__builtin_ctzll(cand));
        cand &= cand - 1;
        bb_clique(adj, cand & adj[v], cur + 1, best);
    }
}

} // namespace

std::size_t covering_number(const FinitePseudoMetric& space, double delta, Mode mode,
                            std::size_t exact_cap) {
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    const std::size_t n = space.size();
    const uint64_t universe = (n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
    if (mode == Mode::exact && n > exact_cap)
        throw InstanceTooLarge("instance too large for exact covering (size " +
                               std::to_string(n) + " > cap " + std::to_string(exact_cap) + ")");
    if (n > 64) {
        if (mode == Mode::exact) throw InstanceTooLarge("exact covering limited to 64 points");
        // greedy without bitsets, only needed for big greedy instances
        std::vector<char> covered(n, 0);
        std::size_t count = 0, left = n;
        while (left > 0) {
            std::size_t best = 0, best_gain = 0;
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t gain = 0;
                for (std::size_t p = 0; p < n; ++p)
                    if (!covered[p] && space.dist(c, p) <= delta) ++gain;
                if (gain > best_gain) { best_gain = gain; best = c; }
            }
            for (std::size_t p = 0; p < n; ++p)
                if (!covered[p] && space.dist(best, p) <= delta) { covered[p] = 1; --left; }
            ++count;
        }
        return count;
    }
    auto balls = ball_masks(space, delta);
    std::size_t greedy = greedy_cover(balls, universe);
    if (mode == Mode::greedy) return greedy;
    std::size_t best = greedy;
    bb_cover(balls, universe, 0, 0, best);
    return best;
}

std::size_t packing_number(const FinitePseudoMetric& space, double delta, Mode mode,
                           std::size_t exact_cap) {
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    const std::size_t n = space.size();
    if (mode == Mode::exact && n > exact_cap)
        throw InstanceTooLarge("instance too large for exact packing (size " +
                               std::to_string(n) + " > cap " + std::to_string(exact_cap) + ")");
    if (mode == Mode::greedy) {
        // first-fit maximal separated subset
        std::vector<std::size_t> chosen;
        for (std::size_t p = 0; p < n; ++p) {
            bool ok = true;
            for (std::size_t c : chosen)
                if (space.dist(p, c) <= delta) { ok = false; break; }
            if (ok) chosen.push_back(p);
        }
        return chosen.size();
    }
    if (n > 64) throw InstanceTooLarge("exact packing limited to 64 points");
    std::vector<uint64_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && space.dist(i, j) > delta) adj[i] |= (uint64_t{1} << j);
    const uint64_t all = (n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
    std::size_t best = 0;
    bb_clique(adj, all, 0, best);
    return best;
}

std::vector<EntropyRow> entropy_profile(const FinitePseudoMetric& space,
                                        const std::vector<double>& deltas, Mode mode,
                                        std::size_t exact_cap) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("deltas must be strictly descending");
    std::vector<EntropyRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas)
        rows.push_back({d, covering_number(space, d, mode, exact_cap),
                        packing_number(space, d, mode, exact_cap)});
    return rows;
}

} // namespace entropylab
