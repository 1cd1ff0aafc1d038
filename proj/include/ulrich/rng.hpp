#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ulrich {

// Seeded generator with reproducible output across platforms.
// std::uniform_int_distribution is implementation defined, so integer
// sampling is done here by rejection on the raw 64-bit stream.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next();
    // Uniform integer in [lo, hi].
    long long uniform(long long lo, long long hi);
    // Independent child stream; the parent state is not advanced.
    SeededRng split(std::string_view label) const;
    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ulrich
