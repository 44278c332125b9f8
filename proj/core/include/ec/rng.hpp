#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ec {

// Identifies one reproducible random stream. The same (seed, stream_id)
// always produces the same sequence; distinct stream_ids give streams that
// are independent for all practical purposes (seeds are mixed through
// splitmix64 before feeding the engine).
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngSpec derive(std::uint64_t sub) const;

    friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

// mt19937_64 wrapper with portable bounded draws. std::uniform_int_distribution
// is implementation-defined, so integer and real draws are done by hand to keep
// outputs identical across standard libraries.
class Rng {
public:
    explicit Rng(RngSpec spec);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound), bound >= 1. Unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t bound);

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    // Floyd's algorithm: uniform k-subset of {0, ..., n-1}, returned sorted.
    std::vector<std::int32_t> sample_distinct(std::int32_t n, std::int32_t k);

    const RngSpec& spec() const { return spec_; }

private:
    RngSpec spec_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace ec
