#include "hcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace hcs {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t index) const {
    return mix64(key_ + (index + 1) * kGolden);
}

double CounterRng::uniform01(std::uint64_t index) const {
    // 53 random bits; +1 keeps the value strictly positive.
    return (static_cast<double>(bits(index) >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t index) const {
    const double u1 = uniform01(2 * index);
    const double u2 = uniform01(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t index, std::uint64_t bound) const {
    // Modulo bias is negligible for bound << 2^64 (here bound <= 10^4).
    return bits(index) % bound;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::initializer_list<std::uint64_t> parts) {
    // FNV-1a over the purpose string, then splitmix chaining of coordinates.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : purpose) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    h = mix64(h ^ master);
    for (std::uint64_t p : parts) {
        h = mix64(h + p * kGolden);
    }
    return h;
}

}  // namespace hcs
