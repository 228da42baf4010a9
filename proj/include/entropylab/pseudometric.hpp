#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entropylab {

// A finite pseudo-metric space given by its full distance matrix.  Distances
// between distinct points may be zero; the triangle inequality is validated
// on construction (tolerance 1e-12).
class FinitePseudoMetric {
public:
    static constexpr double kTriangleTol = 1e-12;

    // Validates all invariants; throws std::invalid_argument on violation.
    static FinitePseudoMetric validate(std::vector<std::vector<double>> matrix,
                                       std::vector<std::string> labels = {});

    std::size_t size() const { return n_; }
    double dist(std::size_t i, std::size_t j) const { return d_[i][j]; }
    const std::vector<std::vector<double>>& matrix() const { return d_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double diameter() const;

private:
    FinitePseudoMetric(std::vector<std::vector<double>> d, std::vector<std::string> labels)
        : n_(d.size()), d_(std::move(d)), labels_(std::move(labels)) {}
    std::size_t n_;
    std::vector<std::vector<double>> d_;
    std::vector<std::string> labels_;
};

enum class Mode { greedy, exact };

// Thrown when exact mode is asked for an instance above the cap; callers must
// choose greedy explicitly, there is no silent fallback.
struct InstanceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultExactCap = 24;

// Minimal number of closed delta-balls (centers among the points themselves)
// covering the space.  Exact mode: branch-and-bound set cover.
std::size_t covering_number(const FinitePseudoMetric& space, double delta, Mode mode,
                            std::size_t exact_cap = kDefaultExactCap);

// Largest subset with pairwise distances strictly greater than delta (exact),
// or a greedily grown maximal such subset (lower bound).
std::size_t packing_number(const FinitePseudoMetric& space, double delta, Mode mode,
                           std::size_t exact_cap = kDefaultExactCap);

struct EntropyRow {
    double delta;
    std::size_t covering;
    std::size_t packing;
};

// deltas must be strictly descending.
std::vector<EntropyRow> entropy_profile(const FinitePseudoMetric& space,
                                        const std::vector<double>& deltas, Mode mode,
                                        std::size_t exact_cap = kDefaultExactCap);

} // namespace entropylab
