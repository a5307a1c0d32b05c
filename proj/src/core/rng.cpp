#include "core/rng.hpp"

#include <cmath>

namespace stablecone {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t RngStream::mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

RngStream::RngStream(std::uint64_t master, std::uint64_t stream)
    : eng_(mix(master, stream)), master_(master), stream_(stream) {}

double RngStream::uniform01() {
    for (;;) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double RngStream::exp1() {
    return -std::log1p(-uniform01());
}

double RngStream::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace stablecone
