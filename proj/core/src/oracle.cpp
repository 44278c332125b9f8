#include "ec/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ec/errors.hpp"
#include "ec/first_moment.hpp"

namespace ec {

namespace {

// Backtracking enumerator. Branches on the lowest unassigned variable, FALSE
// before TRUE, so solutions come out in lexicographic order; unit propagation
// keeps the per-clause counters (#true, #unassigned) consistent with the
// exactly-one-TRUE constraint.
class Enumerator {
public:
    explicit Enumerator(const EcInstance& inst) : inst_(inst) {
        occ_.resize(static_cast<std::size_t>(inst.n) + 1);
        for (std::size_t cid = 0; cid < inst.clauses.size(); ++cid) {
            for (std::int32_t v : inst.clauses[cid]) {
                occ_[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(cid));
            }
        }
        num_true_.assign(inst.clauses.size(), 0);
        num_unassigned_.assign(inst.clauses.size(), inst.k);
        value_.assign(static_cast<std::size_t>(inst.n) + 1, -1);
    }

    void run(std::vector<Assignment>& out) {
        out_ = &out;
        dfs(1);
    }

private:
    bool assign(std::int32_t v, bool val) {
        auto& cell = value_[static_cast<std::size_t>(v)];
        if (cell != -1) return cell == static_cast<std::int8_t>(val);
        cell = static_cast<std::int8_t>(val);
        trail_.push_back(v);
        for (std::int32_t cid : occ_[static_cast<std::size_t>(v)]) {
            auto c = static_cast<std::size_t>(cid);
            --num_unassigned_[c];
            if (val) ++num_true_[c];
            if (num_true_[c] > 1) return false;
            if (num_true_[c] == 0 && num_unassigned_[c] == 0) return false;
            if (num_true_[c] == 1 && num_unassigned_[c] > 0) {
                for (std::int32_t u : inst_.clauses[c]) {
                    if (value_[static_cast<std::size_t>(u)] == -1 && !assign(u, false)) return false;
                }
            } else if (num_true_[c] == 0 && num_unassigned_[c] == 1) {
                for (std::int32_t u : inst_.clauses[c]) {
                    if (value_[static_cast<std::size_t>(u)] == -1) {
                        if (!assign(u, true)) return false;
                        break;
                    }
                }
            }
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            std::int32_t v = trail_.back();
            trail_.pop_back();
            bool val = value_[static_cast<std::size_t>(v)] == 1;
            for (std::int32_t cid : occ_[static_cast<std::size_t>(v)]) {
                auto c = static_cast<std::size_t>(cid);
                ++num_unassigned_[c];
                if (val) --num_true_[c];
            }
            value_[static_cast<std::size_t>(v)] = -1;
        }
    }

    void dfs(std::int32_t from) {
        std::int32_t v = from;
        while (v <= inst_.n && value_[static_cast<std::size_t>(v)] != -1) ++v;
        if (v > inst_.n) {
            Assignment a(inst_.n);
            for (std::int32_t i = 1; i <= inst_.n; ++i) {
                if (value_[static_cast<std::size_t>(i)] == 1) a.set(i, true);
            }
            out_->push_back(std::move(a));
            return;
        }
        for (int val = 0; val < 2; ++val) {
            std::size_t mark = trail_.size();
            if (assign(v, val == 1)) dfs(v + 1);
            undo_to(mark);
        }
    }

    const EcInstance& inst_;
    std::vector<std::vector<std::int32_t>> occ_;
    std::vector<std::int32_t> num_true_;
    std::vector<std::int32_t> num_unassigned_;
    std::vector<std::int8_t> value_;
    std::vector<std::int32_t> trail_;
    std::vector<Assignment>* out_ = nullptr;
};

// Word-packed copies for the quadratic pair loops (n <= 64 in practice).
std::vector<std::uint64_t> pack_words(const SolutionSet& sols) {
    std::vector<std::uint64_t> w;
    if (sols.n <= 64) {
        w.reserve(sols.solutions.size());
        for (const Assignment& a : sols.solutions) {
            w.push_back(a.words().empty() ? 0 : a.words()[0]);
        }
    }
    return w;
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    std::vector<std::size_t> parent;
};

} // namespace

SolutionSet enumerate_solutions(const EcInstance& inst, EnumerationOptions opts) {
    inst.validate();
    if (inst.n > opts.max_n) {
        std::ostringstream oss;
        oss << "enumerate_solutions: n=" << inst.n << " exceeds cap " << opts.max_n;
        throw resource_limit(oss.str());
    }
    SolutionSet out;
    out.n = inst.n;
    out.instance_digest = instance_digest(inst);
    Enumerator e(inst);
    e.run(out.solutions);
    return out;
}

std::int64_t count_overlap_pairs(const SolutionSet& sols, const OverlapWindow& window,
                                 bool include_equal) {
    const std::int64_t s = sols.size();
    const std::int32_t n = sols.n;
    std::int64_t count = 0;
    std::vector<std::uint64_t> words = pack_words(sols);
    for (std::int64_t i = 0; i < s; ++i) {
        for (std::int64_t j = i + 1; j < s; ++j) {
            std::int32_t h = words.empty()
                                 ? sols.solutions[static_cast<std::size_t>(i)].hamming(
                                       sols.solutions[static_cast<std::size_t>(j)])
                                 : std::popcount(words[static_cast<std::size_t>(i)] ^
                                                 words[static_cast<std::size_t>(j)]);
            if (window.contains_agreements(n - h, n)) count += 2;
        }
    }
    if (include_equal && window.contains_agreements(n, n)) count += s;
    return count;
}

std::int64_t count_overlap_pairs(const EcInstance& inst, const OverlapWindow& window,
                                 bool include_equal, EnumerationOptions opts) {
    return count_overlap_pairs(enumerate_solutions(inst, opts), window, include_equal);
}

std::string Rational::to_string() const {
    std::ostringstream oss;
    oss << num << '/' << den;
    return oss.str();
}

std::vector<Rational> overlap_support(const SolutionSet& sols) {
    const std::int64_t s = sols.size();
    const std::int32_t n = sols.n;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::uint64_t> words = pack_words(sols);
    for (std::int64_t i = 0; i < s; ++i) {
        for (std::int64_t j = i + 1; j < s; ++j) {
            std::int32_t h = words.empty()
                                 ? sols.solutions[static_cast<std::size_t>(i)].hamming(
                                       sols.solutions[static_cast<std::size_t>(j)])
                                 : std::popcount(words[static_cast<std::size_t>(i)] ^
                                                 words[static_cast<std::size_t>(j)]);
            seen[static_cast<std::size_t>(h)] = 1;
        }
    }
    std::vector<Rational> out;
    for (std::int32_t h = n; h >= 1; --h) {
        if (!seen[static_cast<std::size_t>(h)]) continue;
        std::int64_t num = n - h;
        std::int64_t den = n;
        std::int64_t g = std::gcd(num, den);
        if (g > 0) {
            num /= g;
            den /= g;
        }
        out.push_back({num, den == 0 ? 1 : den});
    }
    // distances descending == overlaps ascending; h = 0 (equal pair) excluded
    return out;
}

std::vector<Rational> overlap_support(const EcInstance& inst, EnumerationOptions opts) {
    return overlap_support(enumerate_solutions(inst, opts));
}

ClusterReport cluster_decomposition(const SolutionSet& sols, std::int32_t l) {
    if (l < 0) throw invalid_parameters("cluster_decomposition: l must be nonnegative");
    const std::int64_t s = sols.size();
    ClusterReport report;
    report.l = l;
    if (s == 0) return report;

    std::vector<std::uint64_t> words = pack_words(sols);
    auto dist = [&](std::int64_t i, std::int64_t j) -> std::int32_t {
        return words.empty() ? sols.solutions[static_cast<std::size_t>(i)].hamming(
                                   sols.solutions[static_cast<std::size_t>(j)])
                             : std::popcount(words[static_cast<std::size_t>(i)] ^
                                             words[static_cast<std::size_t>(j)]);
    };

    UnionFind uf(static_cast<std::size_t>(s));
    for (std::int64_t i = 0; i < s; ++i) {
        for (std::int64_t j = i + 1; j < s; ++j) {
            if (dist(i, j) <= l) uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }

    std::vector<std::int32_t> comp_of(static_cast<std::size_t>(s));
    std::vector<std::size_t> roots;
    for (std::int64_t i = 0; i < s; ++i) {
        std::size_t r = uf.find(static_cast<std::size_t>(i));
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            report.components.emplace_back();
            it = roots.end() - 1;
        }
        auto idx = static_cast<std::int32_t>(it - roots.begin());
        comp_of[static_cast<std::size_t>(i)] = idx;
        report.components[static_cast<std::size_t>(idx)].push_back(static_cast<std::int32_t>(i));
    }

    report.diameters.assign(report.components.size(), 0);
    for (std::int64_t i = 0; i < s; ++i) {
        for (std::int64_t j = i + 1; j < s; ++j) {
            if (comp_of[static_cast<std::size_t>(i)] != comp_of[static_cast<std::size_t>(j)]) continue;
            auto& dia = report.diameters[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(i)])];
            dia = std::max(dia, dist(i, j));
        }
    }
    return report;
}

std::vector<std::vector<std::int32_t>> hypergraph_components(const EcInstance& inst) {
    UnionFind uf(static_cast<std::size_t>(inst.n) + 1);
    for (const Clause& c : inst.clauses) {
        for (std::size_t i = 1; i < c.size(); ++i) {
            uf.unite(static_cast<std::size_t>(c[0]), static_cast<std::size_t>(c[i]));
        }
    }
    std::vector<std::vector<std::int32_t>> comps;
    std::vector<std::int32_t> comp_of(static_cast<std::size_t>(inst.n) + 1, -1);
    for (std::int32_t v = 1; v <= inst.n; ++v) {
        std::size_t r = uf.find(static_cast<std::size_t>(v));
        if (comp_of[r] == -1) {
            comp_of[r] = static_cast<std::int32_t>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(comp_of[r])].push_back(v);
    }
    return comps; // ordered by smallest member since v ascends
}

std::vector<Assignment> build_solution_path(const Assignment& a, const Assignment& b,
                                            const EcInstance& inst) {
    if (!satisfies(a, inst) || !satisfies(b, inst)) {
        throw invalid_parameters("build_solution_path: endpoints must satisfy the instance");
    }
    std::vector<Assignment> path;
    path.push_back(a);
    Assignment cur = a;
    for (const auto& comp : hypergraph_components(inst)) {
        bool differs = false;
        for (std::int32_t v : comp) {
            if (cur.get(v) != b.get(v)) {
                differs = true;
                break;
            }
        }
        if (!differs) continue;
        for (std::int32_t v : comp) cur.set(v, b.get(v));
        path.push_back(cur);
    }
    return path;
}

ExpectedZ expected_Z(std::int32_t n, std::int64_t m, std::int32_t k, const OverlapWindow& window,
                     std::int32_t max_n) {
    if (n < k || k < 3 || m < 0) throw invalid_parameters("expected_Z: need n >= k >= 3, m >= 0");
    if (n > max_n) {
        std::ostringstream oss;
        oss << "expected_Z: n=" << n << " exceeds cap " << max_n;
        throw resource_limit(oss.str());
    }
    ExpectedZ out;
    double sum = 0.0;
    for (std::int64_t s = 0; s <= n; ++s) {
        if (!window.contains_agreements(s, n)) continue;
        for (std::int64_t a = 0; a <= s; ++a) {
            std::int64_t d = s - a;
            for (std::int64_t b = 0; b + s <= n; ++b) {
                std::int64_t c = n - s - b;
                ++out.quadruples;
                double log_term = log_multinomial4(n, a, b, c, d);
                if (m > 0) {
                    PStar p = pstar_exact(a, b, c, d, n, k);
                    if (p.log_value == -std::numeric_limits<double>::infinity()) continue;
                    log_term += static_cast<double>(m) * p.log_value;
                }
                sum += std::exp(log_term);
            }
        }
    }
    out.value = sum;
    out.log_value = std::log(sum);
    double e = window.epsilon_n;
    double nn = static_cast<double>(n);
    double q = window.q;
    out.quadruple_bound =
        (1.0 + 2.0 * e) * (3.0 - e - e * e + 3.0 * nn + 3.0 * nn * nn * q - 3.0 * nn * nn * q * q) /
        3.0;
    return out;
}

} // namespace ec
