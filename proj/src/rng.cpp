#include "ulrich/rng.hpp"

namespace ulrich {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t SeededRng::next() { return engine_(); }

long long SeededRng::uniform(long long lo, long long hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} / span) * span;
    std::uint64_t r = next();
    while (span != 0 && r >= limit) r = next();
    return lo + static_cast<long long>(span == 0 ? r : r % span);
}

SeededRng SeededRng::split(std::string_view label) const {
    // FNV-1a over the label, mixed with the parent seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return SeededRng(splitmix64(seed_ ^ splitmix64(h)));
}

}  // namespace ulrich
