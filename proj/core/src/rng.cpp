#include "liq/rng.hpp"

#include <cmath>

namespace liq::rng {

namespace {

constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;  // Skein key-schedule constant
constexpr int kRotations[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline std::uint64_t rotl(std::uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
}

}  // namespace

Threefry2x64::Block Threefry2x64::encrypt(const Block& counter, const Block& key) {
    const std::uint64_t ks[3] = {key[0], key[1], kParity ^ key[0] ^ key[1]};
    std::uint64_t x0 = counter[0] + ks[0];
    std::uint64_t x1 = counter[1] + ks[1];
    for (int round = 0; round < 20; ++round) {
        x0 += x1;
        x1 = rotl(x1, kRotations[round % 8]);
        x1 ^= x0;
        if (round % 4 == 3) {
            const std::uint64_t s = static_cast<std::uint64_t>(round / 4 + 1);
            x0 += ks[s % 3];
            x1 += ks[(s + 1) % 3] + s;
        }
    }
    return {x0, x1};
}

Stream::Stream(std::uint64_t seed, std::uint64_t path, std::uint32_t substream)
    : key_{seed, path}, substream_word_(static_cast<std::uint64_t>(substream)) {}

std::uint64_t Stream::next_u64() {
    if (buffered_ == 0) {
        buffer_ = Threefry2x64::encrypt({block_index_, substream_word_}, key_);
        ++block_index_;
        buffered_ = 2;
    }
    return buffer_[2 - buffered_--];
}

double Stream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

double Stream::exponential(double rate) {
    return -std::log(uniform_open()) / rate;
}

}  // namespace liq::rng
