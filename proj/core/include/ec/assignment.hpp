#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ec {

// Boolean valuation of n variables, packed 64 per word. Variable indices are
// 1-based everywhere in the public API (matching the instance text format);
// bit i-1 of the storage holds variable x_i.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::int32_t n, bool fill = false);

    // Parse from a bit string like "100" (x1=1, x2=0, x3=0).
    static Assignment from_string(const std::string& bits);

    std::int32_t size() const { return n_; }

    bool get(std::int32_t var) const;
    void set(std::int32_t var, bool value);
    void flip(std::int32_t var);

    std::int32_t count_ones() const;
    std::int32_t hamming(const Assignment& other) const;

    Assignment complement() const;

    std::string to_string() const;

    // Lexicographic order on the bit string x1 x2 ... xn.
    bool lex_less(const Assignment& other) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::int32_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Sizes of the four agreement classes over all n variables:
// a = |A=B=0|, b = |A=0,B=1|, c = |A=1,B=0|, d = |A=B=1|.
struct GlobalPairProfile {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t d = 0;

    std::int64_t agreements() const { return a + d; }
    friend bool operator==(const GlobalPairProfile&, const GlobalPairProfile&) = default;
};

struct OverlapDistance {
    double overlap = 0.0;
    std::int32_t hamming = 0;
};

// overlap = 1 - hamming/n; throws invalid_parameters on length mismatch.
OverlapDistance overlap_and_distance(const Assignment& a, const Assignment& b);

GlobalPairProfile global_pair_profile(const Assignment& a, const Assignment& b);

// Closed interval [q - epsilon_n/n, q + epsilon_n/n] of admissible overlaps,
// clipped to [0,1]. Boundary membership is decided with a small absolute slack
// so that exact rational overlaps like 1/3 test cleanly against q = 1.0/3.0.
struct OverlapWindow {
    double q = 0.5;
    double epsilon_n = 0.0;

    static double default_epsilon(std::int64_t n, double exponent = 0.75);

    double lo(std::int64_t n) const;
    double hi(std::int64_t n) const;
    bool contains(double overlap, std::int64_t n) const;
    bool contains_agreements(std::int64_t agreements, std::int64_t n) const;
};

} // namespace ec
