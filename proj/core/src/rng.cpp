#include "ec/rng.hpp"

#include <algorithm>

#include "ec/errors.hpp"

namespace ec {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngSpec RngSpec::derive(std::uint64_t sub) const {
    return RngSpec{seed, splitmix64(stream_id * 0x9e3779b97f4a7c15ULL + sub + 1)};
}

Rng::Rng(RngSpec spec) : spec_(spec) {
    std::uint64_t s0 = splitmix64(spec.seed);
    std::uint64_t s1 = splitmix64(s0 ^ splitmix64(spec.stream_id + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s0), static_cast<std::uint32_t>(s0 >> 32),
                      static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32)};
    engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw invalid_parameters("Rng::below: bound must be positive");
    // Reject the tail so every residue is equally likely.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw invalid_parameters("Rng::range: empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::int32_t> Rng::sample_distinct(std::int32_t n, std::int32_t k) {
    if (k < 0 || k > n) throw invalid_parameters("sample_distinct: need 0 <= k <= n");
    std::vector<std::int32_t> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::int32_t j = n - k; j < n; ++j) {
        auto t = static_cast<std::int32_t>(below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), t) != out.end()) {
            out.push_back(j);
        } else {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace ec
