#pragma once

// Counter-based RNG: Philox4x32-10 (Salmon et al., SC'11 constants) so that
// Monte Carlo runs are reproducible and substreams are cheap: stream state is
// just (key, counter).  Normals via Box-Muller on pairs of uniforms.

#include <array>
#include <cmath>
#include <cstdint>

namespace entropylab {

struct Philox4x32 {
    uint64_t key;

    explicit Philox4x32(uint64_t seed) : key(seed) {}

    static constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    static constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;

    std::array<uint32_t, 4> block(uint64_t counter) const {
        uint32_t c0 = static_cast<uint32_t>(counter);
        uint32_t c1 = static_cast<uint32_t>(counter >> 32);
        uint32_t c2 = 0, c3 = 0;
        uint32_t k0 = static_cast<uint32_t>(key);
        uint32_t k1 = static_cast<uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = static_cast<uint64_t>(M0) * c0;
            uint64_t p1 = static_cast<uint64_t>(M1) * c2;
            uint32_t h0 = static_cast<uint32_t>(p0 >> 32), l0 = static_cast<uint32_t>(p0);
            uint32_t h1 = static_cast<uint32_t>(p1 >> 32), l1 = static_cast<uint32_t>(p1);
            uint32_t n0 = h1 ^ c1 ^ k0;
            uint32_t n1 = l1;
            uint32_t n2 = h0 ^ c3 ^ k1;
            uint32_t n3 = l0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += W0; k1 += W1;
        }
        return {c0, c1, c2, c3};
    }
};

// Sequential stream view over the counter space.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream = 0)
        : gen_(seed ^ (stream * 0x9E3779B97F4A7C15ull)), ctr_(0), idx_(4) {}

    uint32_t next_u32() {
        if (idx_ == 4) { buf_ = gen_.block(ctr_++); idx_ = 0; }
        return buf_[idx_++];
    }

    // uniform in (0,1): never returns 0 (Box-Muller takes a log)
    double next_uniform() {
        uint64_t hi = next_u32(), lo = next_u32();
        uint64_t u53 = ((hi << 21) ^ lo) & ((1ull << 53) - 1);
        return (static_cast<double>(u53) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double next_normal() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u1 = next_uniform(), u2 = next_uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    Philox4x32 gen_;
    uint64_t ctr_;
    std::array<uint32_t, 4> buf_{};
    int idx_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace entropylab
