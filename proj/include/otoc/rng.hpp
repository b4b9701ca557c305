#pragma once

#include <cstdint>
#include <random>

namespace otoc {

namespace detail {

// splitmix64 finalizer; used both for engine seeding and substream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Stream-splitting rule: a stream is identified by a 64-bit key; substream k of a
// stream with key K has key mix64(K + GOLDEN * (k + 1)). Keys are independent of
// how many values have been drawn, so (seed, stream-index) paths are reproducible
// regardless of evaluation order or parallelism.
inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t index) {
    return detail::mix64(key + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Seedable deterministic generator. The raw engine is std::mt19937_64, whose
// output sequence for a given 64-bit seed is fixed by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed), engine_(detail::mix64(seed)) {}

    // Independent child stream; see derive_stream above.
    Rng substream(std::uint64_t index) const { return Rng(derive_stream(key_, index)); }

    std::uint64_t stream_key() const { return key_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    // Bernoulli draw.
    bool next_bool(double p) { return next_double() < p; }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace otoc
