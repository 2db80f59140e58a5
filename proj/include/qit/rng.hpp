#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qit {

/// Identifies the generator and derivation scheme; recorded next to every seed
/// so that archived outputs stay reproducible if the scheme ever changes.
inline constexpr const char* kRngVersion = "splitmix64-v1";

/// SplitMix64: tiny, fast, and identical on every platform, unlike the
/// distributions in <random> whose outputs are implementation-defined.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (cosine branch; one value per call,
    /// two uniforms consumed, so the stream advance is fixed and portable).
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

/// Derives an independent substream seed from (seed, stream index).
/// Runs the parent stream's output function over a stream-tagged state.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0xa0761d6478bd642fULL * (stream + 1)));
    return g.next();
}

}  // namespace qit
