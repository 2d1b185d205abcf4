#pragma once

#include <cstdint>
#include <string_view>

namespace neurotwin {

// Counter-based splittable generator built on the SplitMix64 finalizer.
//
// Draw i of a stream with seed s is mix64(s + (i + 1) * GOLDEN), where
// mix64 is the SplitMix64 output permutation and GOLDEN = 0x9E3779B97F4A7C15.
// Child streams are derived as mix64(s ^ fnv1a64(key)). Doubles use the top
// 53 bits, u = (bits >> 11) * 2^-53. All reports record the stream seed, so
// any implementation of these three formulas reproduces the runs.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view key);

class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

    // Pure counter access: result depends only on (seed, counter).
    std::uint64_t bits_at(std::uint64_t counter) const;
    double uniform01_at(std::uint64_t counter) const;      // [0, 1)
    double uniform_pm1_at(std::uint64_t counter) const;    // [-1, 1)

    // Sequential convenience over the same counter sequence.
    std::uint64_t next_bits() { return bits_at(cursor_++); }
    double next_uniform01() { return uniform01_at(cursor_++); }
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform01();
    }

    SplitRng split(std::string_view key) const;
    SplitRng split(std::uint64_t key) const;

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t cursor_ = 0;
};

}  // namespace neurotwin
