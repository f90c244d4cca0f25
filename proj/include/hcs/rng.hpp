#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace hcs {

// Counter-based generator: value(i) depends only on (key, i), never on call
// order, so streams are reproducible across threads and runs.
// Stream definition: bits(i) = splitmix64_mix(key + (i + 1) * GOLDEN).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t key() const { return key_; }

    std::uint64_t bits(std::uint64_t index) const;

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform01(std::uint64_t index) const;

    // Standard normal via Box-Muller; consumes uniforms at (2*index, 2*index+1).
    double gaussian(std::uint64_t index) const;

    // Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t index, std::uint64_t bound) const;

private:
    std::uint64_t key_;
};

// Sub-seed derivation used everywhere randomness is needed: hashes a purpose
// string plus integer coordinates into a fresh key. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::initializer_list<std::uint64_t> parts = {});

}  // namespace hcs
