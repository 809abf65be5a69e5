#pragma once

// Counter-based pseudo-random numbers, splittable by sample index: stream i of
// seed s is a pure function of (s, i). No global state.

#include <cstdint>

namespace rotwalk {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
        state_ = splitmix64(s) ^ splitmix64(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace rotwalk
