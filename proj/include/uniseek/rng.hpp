#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace uniseek {

/// SplitMix64 mixing step — used to derive independent substream seeds from a
/// master seed in a counter-based (order-insensitive) way.
[[nodiscard]] inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the index-th substream of a master seed. Pure function of
/// (master, index): runs may be launched in any order or in parallel and
/// still consume identical randomness.
[[nodiscard]] inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0xd1b54a32d192ed03ULL * (index + 1));
    std::uint64_t z = splitmix64(s);
    return splitmix64(s) ^ z;
}

/// Deterministic standard-normal stream. Uniforms come from mt19937_64 via the
/// fixed mapping (x >> 11) * 2^-53 and normals from an explicit Box-Muller
/// transform, so a given seed yields the same sequence on every platform
/// (std::normal_distribution makes no such guarantee).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log never sees zero; u2 in [0, 1).
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace uniseek
