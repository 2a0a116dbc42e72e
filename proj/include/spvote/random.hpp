#pragma once

// Seeded random streams. mt19937_64 output is fully specified by the standard;
// the helpers below avoid the implementation-defined std distributions so that
// runs are reproducible across toolchains.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace spvote {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent child seed from `base` and a sequence of tags.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept;

/// FNV-1a, used to turn ids into seed tags.
std::uint64_t hash_tag(std::string_view text) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0,1) with 53 random bits.
    double uniform01();
    /// Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n);
    bool coin() { return (next() >> 63) != 0; }
    /// Draws an index with probability proportional to `weights`.
    std::size_t discrete(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace spvote
