#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace qergo {

// Counter-based pseudorandom stream. Draw i of a stream is a pure function
// of (key, i), so substreams derived from (seed, name, worker-index) are
// bit-reproducible regardless of evaluation order across workers.
//
// The mixing function is the splitmix64 finalizer applied to
// key + i * golden-ratio increment. No libc or libstdc++ distribution is
// involved anywhere, so sequences are identical across platforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : key_(mix(seed ^ kSeedTag)) {}

    RandomStream(std::uint64_t seed, std::string_view name)
        : key_(mix(mix(seed ^ kSeedTag) ^ fnv1a(name))) {}

    // Derived substream, e.g. one per worker or per case index.
    [[nodiscard]] RandomStream substream(std::uint64_t index) const {
        RandomStream s(0);
        s.key_ = mix(key_ ^ mix(index ^ kSubTag));
        s.counter_ = 0;
        return s;
    }

    std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGamma); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; two uniforms per draw.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        // Guard log(0).
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kSeedTag = 0x5851f42d4c957f2dULL;
    static constexpr std::uint64_t kSubTag = 0xd1342543de82ef95ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += kGamma;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qergo
