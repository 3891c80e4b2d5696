#pragma once

// Counter-based 64-bit generator: element i of stream `key` is
//
//   mix(key + (i + 1) * 0x9E3779B97F4A7C15)
//
// where mix is the SplitMix64 finalizer
//
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
//
// (all arithmetic mod 2^64). This is exactly SplitMix64 started from `key`,
// so any element can be computed directly from (key, i). Substream keys are
// derived as substream_key(seed, id) = mix(seed ^ mix(id * 0x9E3779B97F4A7C15
// + 0x632BE59BD9B4E019)). Uniform doubles take the top 53 bits:
// (x >> 11) * 2^-53, in [0, 1).

#include <cstdint>

namespace chaoscope {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t id) noexcept {
    return splitmix64_mix(seed ^ splitmix64_mix(id * kGolden64 + 0x632BE59BD9B4E019ULL));
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(key), counter_(counter) {}

    static constexpr CounterRng substream(std::uint64_t seed, std::uint64_t id) noexcept {
        return CounterRng(substream_key(seed, id));
    }

    constexpr std::uint64_t at(std::uint64_t i) const noexcept { return splitmix64_mix(key_ + (i + 1) * kGolden64); }

    constexpr std::uint64_t next_u64() noexcept { return at(counter_++); }

    constexpr double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace chaoscope
