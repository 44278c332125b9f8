#include "ec/assignment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ec/errors.hpp"

namespace ec {

namespace {
constexpr double kWindowSlack = 1e-12;
}

Assignment::Assignment(std::int32_t n, bool fill) : n_(n) {
    if (n < 0) throw invalid_parameters("Assignment: negative length");
    words_.assign((static_cast<std::size_t>(n) + 63) / 64, fill ? ~std::uint64_t{0} : 0);
    if (fill && n % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    }
}

Assignment Assignment::from_string(const std::string& bits) {
    Assignment a(static_cast<std::int32_t>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw invalid_parameters("Assignment::from_string: expected only 0/1");
        }
        if (bits[i] == '1') a.set(static_cast<std::int32_t>(i) + 1, true);
    }
    return a;
}

bool Assignment::get(std::int32_t var) const {
    std::size_t i = static_cast<std::size_t>(var) - 1;
    return (words_[i / 64] >> (i % 64)) & 1u;
}

void Assignment::set(std::int32_t var, bool value) {
    std::size_t i = static_cast<std::size_t>(var) - 1;
    std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (value) {
        words_[i / 64] |= mask;
    } else {
        words_[i / 64] &= ~mask;
    }
}

void Assignment::flip(std::int32_t var) {
    std::size_t i = static_cast<std::size_t>(var) - 1;
    words_[i / 64] ^= std::uint64_t{1} << (i % 64);
}

std::int32_t Assignment::count_ones() const {
    std::int32_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::int32_t Assignment::hamming(const Assignment& other) const {
    if (n_ != other.n_) throw invalid_parameters("Assignment::hamming: length mismatch");
    std::int32_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        c += std::popcount(words_[i] ^ other.words_[i]);
    }
    return c;
}

Assignment Assignment::complement() const {
    Assignment out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    if (n_ % 64 != 0 && !out.words_.empty()) {
        out.words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }
    return out;
}

std::string Assignment::to_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (std::int32_t v = 1; v <= n_; ++v) {
        if (get(v)) s[static_cast<std::size_t>(v) - 1] = '1';
    }
    return s;
}

bool Assignment::lex_less(const Assignment& other) const {
    // Lower variable index = more significant position in the string, but it
    // sits at a lower bit, so compare the lowest differing bit per word.
    std::size_t common = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < common; ++i) {
        std::uint64_t diff = words_[i] ^ other.words_[i];
        if (diff != 0) {
            std::uint64_t low = diff & (~diff + 1);
            return (words_[i] & low) == 0;
        }
    }
    return n_ < other.n_;
}

OverlapDistance overlap_and_distance(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size()) {
        throw invalid_parameters("overlap_and_distance: length mismatch");
    }
    if (a.size() == 0) return {1.0, 0};
    std::int32_t h = a.hamming(b);
    return {1.0 - static_cast<double>(h) / static_cast<double>(a.size()), h};
}

GlobalPairProfile global_pair_profile(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size()) {
        throw invalid_parameters("global_pair_profile: length mismatch");
    }
    GlobalPairProfile p;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        p.d += std::popcount(wa[i] & wb[i]);
        p.c += std::popcount(wa[i] & ~wb[i]);
        p.b += std::popcount(~wa[i] & wb[i]);
    }
    p.a = a.size() - p.b - p.c - p.d;
    return p;
}

double OverlapWindow::default_epsilon(std::int64_t n, double exponent) {
    return std::pow(static_cast<double>(n), exponent);
}

double OverlapWindow::lo(std::int64_t n) const {
    return std::max(0.0, q - epsilon_n / static_cast<double>(n));
}

double OverlapWindow::hi(std::int64_t n) const {
    return std::min(1.0, q + epsilon_n / static_cast<double>(n));
}

bool OverlapWindow::contains(double overlap, std::int64_t n) const {
    return overlap >= lo(n) - kWindowSlack && overlap <= hi(n) + kWindowSlack;
}

bool OverlapWindow::contains_agreements(std::int64_t agreements, std::int64_t n) const {
    return contains(static_cast<double>(agreements) / static_cast<double>(n), n);
}

} // namespace ec
