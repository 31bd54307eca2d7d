#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace orsim {

/// Seeded random stream with named, independent substreams. Identical
/// seeds yield identical draw sequences on every platform: the engine is
/// the fully specified std::mt19937_64 and doubles are derived from raw
/// 64-bit draws rather than a distribution object.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    /// Derives an independent stream keyed by (seed, name). Does not
    /// advance this stream.
    RngStream substream(std::string_view name) const;

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform in [0, n); rejection-sampled, no modulo bias.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Uniform in [lo, hi).
    double uniform_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    static std::uint64_t mix(std::uint64_t x);

    std::uint64_t seed_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace orsim
