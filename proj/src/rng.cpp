#include "neurotwin/rng.hpp"

namespace neurotwin {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view key) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t SplitRng::bits_at(std::uint64_t counter) const {
    return mix64(seed_ + (counter + 1) * kGolden);
}

double SplitRng::uniform01_at(std::uint64_t counter) const {
    return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
}

double SplitRng::uniform_pm1_at(std::uint64_t counter) const {
    return 2.0 * uniform01_at(counter) - 1.0;
}

SplitRng SplitRng::split(std::string_view key) const {
    return SplitRng(mix64(seed_ ^ fnv1a64(key)));
}

SplitRng SplitRng::split(std::uint64_t key) const {
    return SplitRng(mix64(seed_ ^ mix64(key)));
}

}  // namespace neurotwin
