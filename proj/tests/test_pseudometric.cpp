#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entropylab/pseudometric.hpp"
#include "entropylab/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

using namespace entropylab;

namespace {

FinitePseudoMetric random_euclidean(std::size_t n, uint64_t seed, double scale = 1.0) {
    RngStream rng(seed, 0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {scale * rng.next_uniform(), scale * rng.next_uniform()};
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i][j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
    return FinitePseudoMetric::validate(std::move(d));
}

// reference implementations by exhaustive subset enumeration (n <= 16)
std::size_t covering_brute(const FinitePseudoMetric& m, double delta) {
    const std::size_t n = m.size();
    std::size_t best = n;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool covers = true;
        for (std::size_t p = 0; p < n && covers; ++p) {
            bool hit = false;
            for (std::size_t c = 0; c < n && !hit; ++c)
                if ((mask >> c) & 1) hit = m.dist(p, c) <= delta;
            covers = hit;
        }
        if (covers) best = std::min<std::size_t>(best, __builtin_popcount(mask));
    }
    return best;
}

std::size_t packing_brute(const FinitePseudoMetric& m, double delta) {
    const std::size_t n = m.size();
    std::size_t best = 0;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            if ((mask >> i) & 1)
                for (std::size_t j = i + 1; j < n && ok; ++j)
                    if ((mask >> j) & 1) ok = m.dist(i, j) > delta;
        if (ok) best = std::max<std::size_t>(best, __builtin_popcount(mask));
    }
    return best;
}

} // namespace

TEST_CASE("validate rejects broken matrices") {
    CHECK_THROWS_AS(FinitePseudoMetric::validate({{0.0, 1.0}, {2.0, 0.0}}),
                    std::invalid_argument);  // asymmetric
    CHECK_THROWS_AS(FinitePseudoMetric::validate({{0.5}}), std::invalid_argument);  // diagonal
    CHECK_THROWS_AS(FinitePseudoMetric::validate({{0.0, -1.0}, {-1.0, 0.0}}),
                    std::invalid_argument);  // negative
    // triangle: d(0,2)=5 > d(0,1)+d(1,2)=2
    CHECK_THROWS_AS(FinitePseudoMetric::validate(
                        {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}),
                    std::invalid_argument);
    // zero distance between distinct points is allowed (pseudo-metric)
    auto m = FinitePseudoMetric::validate({{0, 0}, {0, 0}});
    CHECK(m.size() == 2);
    CHECK(m.diameter() == 0.0);
}

TEST_CASE("exact covering and packing match exhaustive enumeration up to 12 points") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        std::size_t n = 5 + seed % 8;  // 5..12
        auto m = random_euclidean(n, seed);
        for (double delta : {0.05, 0.15, 0.3, 0.6, 1.2}) {
            CAPTURE(seed);
            CAPTURE(n);
            CAPTURE(delta);
            CHECK(covering_number(m, delta, Mode::exact) == covering_brute(m, delta));
            CHECK(packing_number(m, delta, Mode::exact) == packing_brute(m, delta));
        }
    }
}

TEST_CASE("greedy brackets the exact answers") {
    for (uint64_t seed = 20; seed <= 25; ++seed) {
        auto m = random_euclidean(12, seed);
        for (double delta : {0.1, 0.25, 0.5}) {
            std::size_t cov_e = covering_number(m, delta, Mode::exact);
            std::size_t cov_g = covering_number(m, delta, Mode::greedy);
            std::size_t pack_e = packing_number(m, delta, Mode::exact);
            std::size_t pack_g = packing_number(m, delta, Mode::greedy);
            CHECK(cov_g >= cov_e);       // greedy cover is a valid cover
            CHECK(pack_g <= pack_e);     // greedy packing is a valid packing
            CHECK(pack_g >= 1);
        }
    }
}

TEST_CASE("standard inequalities N(delta) <= P(delta) and P(2delta) <= N(delta)") {
    for (uint64_t seed = 40; seed <= 44; ++seed) {
        auto m = random_euclidean(10, seed);
        for (double delta : {0.08, 0.2, 0.4}) {
            std::size_t cov = covering_number(m, delta, Mode::exact);
            std::size_t pack = packing_number(m, delta, Mode::exact);
            std::size_t pack2 = packing_number(m, 2 * delta, Mode::exact);
            CHECK(cov <= pack);
            CHECK(pack2 <= cov);
        }
    }
}

TEST_CASE("exact mode refuses instances above the cap, greedy does not") {
    auto m = random_euclidean(30, 99);
    CHECK_THROWS_AS(covering_number(m, 0.2, Mode::exact), InstanceTooLarge);
    CHECK_THROWS_AS(packing_number(m, 0.2, Mode::exact), InstanceTooLarge);
    CHECK_NOTHROW(covering_number(m, 0.2, Mode::greedy));
    // raising the cap explicitly is allowed
    CHECK_NOTHROW(packing_number(m, 0.2, Mode::exact, 30));
}

TEST_CASE("entropy_profile is monotone in delta and validates the grid") {
    auto m = random_euclidean(12, 7);
    std::vector<double> deltas{0.8, 0.4, 0.2, 0.1, 0.05};
    auto rows = entropy_profile(m, deltas, Mode::exact);
    REQUIRE(rows.size() == deltas.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].delta == deltas[i]);
        CHECK(rows[i].covering <= rows[i].packing);
        if (i) {
            CHECK(rows[i].covering >= rows[i - 1].covering);
            CHECK(rows[i].packing >= rows[i - 1].packing);
        }
    }
    CHECK(rows.back().covering <= m.size());
    CHECK_THROWS_AS(entropy_profile(m, {0.1, 0.2}, Mode::exact), std::invalid_argument);
    CHECK_THROWS_AS(entropy_profile(m, {0.1, 0.1}, Mode::exact), std::invalid_argument);
}

TEST_CASE("hand-checked instance") {
    // three colinear points at 0, 1, 2
    auto m = FinitePseudoMetric::validate({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(covering_number(m, 1.0, Mode::exact) == 1);   // center at the middle point
    CHECK(covering_number(m, 0.5, Mode::exact) == 3);
    CHECK(packing_number(m, 0.5, Mode::exact) == 3);
    CHECK(packing_number(m, 1.0, Mode::exact) == 2);    // endpoints only
    CHECK(packing_number(m, 2.0, Mode::exact) == 1);
    CHECK(m.diameter() == 2.0);
}
