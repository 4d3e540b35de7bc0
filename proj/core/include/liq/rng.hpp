#pragma once

#include <array>
#include <cstdint>

namespace liq::rng {

// Threefry2x64-20 counter-based generator. A block is a pure function of
// (counter, key), so streams can be sliced by path index and substream
// without any shared state: key = (seed, path), counter = (block index,
// substream tag). Results are identical regardless of how paths are
// scheduled across workers.
struct Threefry2x64 {
    using Block = std::array<std::uint64_t, 2>;
    static Block encrypt(const Block& counter, const Block& key);
};

// Substream tags. Factor noise and Poisson clocks must never share draws,
// otherwise changing theta would perturb the Brownian increments.
inline constexpr std::uint32_t kSubstreamFactor = 0;
inline constexpr std::uint32_t kSubstreamPoisson = 1;
inline constexpr std::uint32_t kSubstreamScenario = 2;

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t path, std::uint32_t substream);

    std::uint64_t next_u64();

    // uniform on [0,1) with 53 random bits
    double uniform();
    // uniform on (0,1); safe as a log() argument
    double uniform_open();
    // standard normal, Box-Muller (no rejection, so the draw count per
    // variate is fixed and streams stay aligned)
    double normal();
    // Exp(rate); rate > 0
    double exponential(double rate);

private:
    Threefry2x64::Block key_;
    std::uint64_t block_index_ = 0;
    std::uint64_t substream_word_;
    Threefry2x64::Block buffer_{};
    int buffered_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// Both random sources a simulated path needs, derived from (seed, path).
struct PathRng {
    Stream factor;
    Stream poisson;
    PathRng(std::uint64_t seed, std::uint64_t path)
        : factor(seed, path, kSubstreamFactor), poisson(seed, path, kSubstreamPoisson) {}
};

}  // namespace liq::rng
