#pragma once

#include <cstdint>
#include <random>

namespace stablecone {

// Reproducible stream keyed by (master seed, stream id). mt19937_64 has a
// standard-specified algorithm, so identical keys give bit-identical draws on
// any conforming implementation. The std:: distribution adaptors do not have
// that guarantee, hence the hand-rolled transforms below.
class RngStream {
public:
    RngStream(std::uint64_t master, std::uint64_t stream);

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

    std::uint64_t raw() { return eng_(); }

    // uniform on the open interval (0, 1), 53-bit resolution
    double uniform01();

    // standard exponential
    double exp1();

    // standard normal (Box-Muller, cosine branch)
    double normal();

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return stream_; }

private:
    std::mt19937_64 eng_;
    std::uint64_t master_ = 0;
    std::uint64_t stream_;
};

} // namespace stablecone
