#ifndef MSMSIM_RNG_HPP
#define MSMSIM_RNG_HPP

// Counter-based uniform streams (Philox4x32-10).  Every draw is addressed by
// (stream key, step, slot), so adding or removing variables elsewhere in a
// scenario never shifts the uniforms another variable consumes, and parallel
// schedules cannot change results.

#include <cstdint>
#include <array>

namespace msmsim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint64_t m0 = 0xD2511F53ULL, m1 = 0xCD9E8D57ULL;
    std::uint64_t p0 = m0 * c[0];
    std::uint64_t p1 = m1 * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    std::uint32_t n1 = lo1;
    std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    std::uint32_t n3 = lo0;
    c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
}

inline std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                               std::uint64_t ctr_hi,
                                               std::uint64_t ctr_lo) {
    constexpr std::uint32_t w0 = 0x9E3779B9U, w1 = 0xBB67AE85U;
    std::uint32_t c[4] = {
        static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
        static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(c, k0, k1);
        k0 += w0;
        k1 += w1;
    }
    return {c[0], c[1], c[2], c[3]};
}

} // namespace detail

// Purpose tags keep the main simulation, oracle runs, and bootstrap resamples
// on non-overlapping streams of the same master seed.
enum class RngTag : std::uint64_t {
    simulate = 1,
    oracle = 2,
    bootstrap = 3,
    study = 4,
};

inline std::uint64_t make_stream_key(std::uint64_t master_seed, RngTag tag,
                                     std::uint64_t substream) {
    std::uint64_t k = detail::splitmix64(master_seed);
    k = detail::splitmix64(k ^ static_cast<std::uint64_t>(tag) * 0x9E3779B97F4A7C15ULL);
    k = detail::splitmix64(k ^ substream);
    return k;
}

// Uniform draws for one individual.  `step` is -1 for the baseline block and
// 0..K for follow-up steps; `slot` indexes the variable within the block.
class IndividualDraws {
public:
    IndividualDraws(std::uint64_t stream_key, std::uint64_t individual)
        : key_(stream_key), id_(individual) {}

    double at(int step, int slot) const {
        std::uint64_t ctr_lo =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(step + 1)) << 32) |
            static_cast<std::uint32_t>(slot);
        auto out = detail::philox4x32(key_, id_, ctr_lo);
        std::uint64_t bits =
            (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        // 53 random bits plus a half-ulp offset keeps the draw strictly inside
        // (0,1) so downstream logs and quantiles are always defined.
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t id_;
};

// Small sequential generator for places where addressable draws are not
// needed (bootstrap index resampling, oracle utilities).
class SequentialRng {
public:
    explicit SequentialRng(std::uint64_t key) : key_(key), ctr_(0) {}

    double uniform() {
        auto out = detail::philox4x32(key_, 0, ctr_++);
        std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        auto out = detail::philox4x32(key_, 0, ctr_++);
        std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        return bits % n;
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

} // namespace msmsim

#endif
