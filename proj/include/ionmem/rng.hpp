#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ionmem {

// SplitMix64 finalizer. Used to derive independent substream seeds from one
// master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Standard normal draws from std::mt19937_64 (whose output sequence is fixed
// by the C++ standard) via the Box-Muller transform. std::normal_distribution
// is avoided because its algorithm is implementation-defined.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    NormalRng(std::uint64_t master_seed, std::uint64_t stream)
        : engine_(splitmix64(master_seed ^ splitmix64(stream))) {}

    // Uniform on (0, 1], 53 bits.
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ionmem
