#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "ec/errors.hpp"
#include "ec/oracle.hpp"
#include "ec/parallel.hpp"

using namespace ec;

namespace {

// Independent oracle: plain scan of all 2^n assignments.
std::vector<std::uint32_t> brute_force_masks(const EcInstance& inst) {
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> clause_masks;
    for (const Clause& c : inst.clauses) {
        std::uint32_t m = 0;
        for (std::int32_t v : c) m |= 1u << (v - 1);
        clause_masks.push_back(m);
    }
    for (std::uint32_t mask = 0; mask < (1u << inst.n); ++mask) {
        bool ok = true;
        for (std::uint32_t cm : clause_masks) {
            if (std::popcount(mask & cm) != 1) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(mask);
    }
    return out;
}

std::uint32_t to_mask(const Assignment& a) {
    std::uint32_t m = 0;
    for (std::int32_t v = 1; v <= a.size(); ++v) {
        if (a.get(v)) m |= 1u << (v - 1);
    }
    return m;
}

std::set<std::string> to_strings(const SolutionSet& s) {
    std::set<std::string> out;
    for (const Assignment& a : s.solutions) out.insert(a.to_string());
    return out;
}

// The four-triple instance on n=4 has no satisfying assignment.
EcInstance unsat_instance() {
    return EcInstance{4, 3, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}};
}

} // namespace

TEST_CASE("enumerate_solutions: single clause") {
    EcInstance inst{3, 3, {{1, 2, 3}}};
    SolutionSet s = enumerate_solutions(inst);
    CHECK(to_strings(s) == std::set<std::string>{"100", "010", "001"});
    // lexicographic output order
    REQUIRE(s.size() == 3);
    CHECK(s.solutions[0].to_string() == "001");
    CHECK(s.solutions[1].to_string() == "010");
    CHECK(s.solutions[2].to_string() == "100");
}

TEST_CASE("enumerate_solutions: empty formula lists every assignment") {
    EcInstance inst{2, 3, {}};
    SolutionSet s = enumerate_solutions(inst);
    CHECK(s.size() == 4);
    CHECK(to_strings(s) == std::set<std::string>{"00", "01", "10", "11"});
}

TEST_CASE("enumerate_solutions: two overlapping clauses") {
    EcInstance inst{4, 3, {{1, 2, 3}, {1, 2, 4}}};
    SolutionSet s = enumerate_solutions(inst);
    CHECK(to_strings(s) == std::set<std::string>{"1000", "0100", "0011"});
}

TEST_CASE("enumerate_solutions matches the brute-force mask scan") {
    for (std::uint64_t stream = 0; stream < 40; ++stream) {
        EcInstance inst = generate_instance(11, 4, 3, {321, stream});
        SolutionSet s = enumerate_solutions(inst);
        std::vector<std::uint32_t> brute = brute_force_masks(inst);
        REQUIRE(s.size() == static_cast<std::int64_t>(brute.size()));
        std::set<std::uint32_t> got;
        for (const Assignment& a : s.solutions) got.insert(to_mask(a));
        CHECK(got == std::set<std::uint32_t>(brute.begin(), brute.end()));
        CHECK(std::is_sorted(s.solutions.begin(), s.solutions.end(),
                             [](const Assignment& x, const Assignment& y) { return x.lex_less(y); }));
    }
}

TEST_CASE("enumerate_solutions: cap is enforced") {
    EcInstance big = generate_instance(40, 4, 3, {0, 0});
    CHECK_THROWS_AS(enumerate_solutions(big), resource_limit);
    EnumerationOptions relaxed;
    relaxed.max_n = 10;
    EcInstance mid = generate_instance(11, 4, 3, {0, 0});
    CHECK_THROWS_AS(enumerate_solutions(mid, relaxed), resource_limit);
}

TEST_CASE("count_overlap_pairs: single clause window at 1/3") {
    EcInstance inst{3, 3, {{1, 2, 3}}};
    CHECK(count_overlap_pairs(inst, {1.0 / 3.0, 0.0}, false) == 6);
    CHECK(count_overlap_pairs(inst, {1.0, 0.0}, false) == 0);
    CHECK(count_overlap_pairs(inst, {1.0, 0.0}, true) == 3);
    // a window outside the support
    CHECK(count_overlap_pairs(inst, {2.0 / 3.0, 0.0}, true) == 0);
}

TEST_CASE("overlap_support examples") {
    EcInstance single{3, 3, {{1, 2, 3}}};
    CHECK(overlap_support(single) == std::vector<Rational>{{1, 3}});

    CHECK(overlap_support(unsat_instance()).empty());

    EcInstance free2{2, 3, {}};
    CHECK(overlap_support(free2) == std::vector<Rational>{{0, 1}, {1, 2}});
    CHECK(Rational{1, 2}.to_string() == "1/2");
}

TEST_CASE("cluster_decomposition: radius extremes and the single-clause instance") {
    EcInstance inst{3, 3, {{1, 2, 3}}};
    SolutionSet s = enumerate_solutions(inst);

    ClusterReport everything = cluster_decomposition(s, 3);
    CHECK(everything.components.size() == 1);

    ClusterReport isolated = cluster_decomposition(s, 0);
    CHECK(isolated.components.size() == 3);
    for (std::int32_t d : isolated.diameters) CHECK(d == 0);

    ClusterReport at2 = cluster_decomposition(s, 2);
    REQUIRE(at2.components.size() == 1);
    CHECK(at2.components[0].size() == 3);
    CHECK(at2.diameters[0] == 2);
}

TEST_CASE("cluster_decomposition: transitive closure, not direct distance") {
    // 000, 011, 110 on n=3: consecutive distances 2, but 000 vs 110 is 2 as
    // well; use n=4 chain 0000, 0011, 1111 (gaps 2,2; ends at distance 4)
    SolutionSet s;
    s.n = 4;
    s.solutions = {Assignment::from_string("0000"), Assignment::from_string("0011"),
                   Assignment::from_string("1111")};
    ClusterReport r = cluster_decomposition(s, 2);
    REQUIRE(r.components.size() == 1);
    CHECK(r.diameters[0] == 4);
}

TEST_CASE("build_solution_path: identical endpoints") {
    EcInstance inst{3, 3, {{1, 2, 3}}};
    Assignment a = Assignment::from_string("100");
    auto path = build_solution_path(a, a, inst);
    REQUIRE(path.size() == 1);
    CHECK(path[0] == a);
}

TEST_CASE("build_solution_path: two disjoint clauses") {
    EcInstance inst{6, 3, {{1, 2, 3}, {4, 5, 6}}};
    Assignment a = Assignment::from_string("100100");
    Assignment b = Assignment::from_string("010010");
    auto path = build_solution_path(a, b, inst);
    REQUIRE(path.size() == 3);
    CHECK(path[0] == a);
    CHECK(path[1] == Assignment::from_string("010100"));
    CHECK(path[2] == b);
    for (const Assignment& step : path) CHECK(satisfies(step, inst));

    // differing on a single component -> single step
    Assignment c = Assignment::from_string("001100");
    auto short_path = build_solution_path(a, c, inst);
    CHECK(short_path.size() == 2);
}

TEST_CASE("build_solution_path: rejects non-satisfying endpoints") {
    EcInstance inst{3, 3, {{1, 2, 3}}};
    CHECK_THROWS_AS(
        build_solution_path(Assignment::from_string("110"), Assignment::from_string("100"), inst),
        invalid_parameters);
}

TEST_CASE("build_solution_path: validity over random instances") {
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
        EcInstance inst = generate_instance(12, 4, 3, {777, stream});
        SolutionSet s = enumerate_solutions(inst);
        if (s.size() < 2) continue;
        auto comps = hypergraph_components(inst);
        std::size_t max_comp = 0;
        for (const auto& c : comps) max_comp = std::max(max_comp, c.size());
        Rng rng({888, stream});
        for (int trial = 0; trial < 10; ++trial) {
            const Assignment& a = s.solutions[rng.below(s.solutions.size())];
            const Assignment& b = s.solutions[rng.below(s.solutions.size())];
            auto path = build_solution_path(a, b, inst);
            REQUIRE(path.front() == a);
            REQUIRE(path.back() == b);
            for (std::size_t i = 0; i < path.size(); ++i) {
                CHECK(satisfies(path[i], inst));
                if (i > 0) {
                    auto h = path[i].hamming(path[i - 1]);
                    CHECK(h >= 1);
                    CHECK(h <= static_cast<std::int32_t>(max_comp));
                }
            }
        }
    }
}

TEST_CASE("hypergraph_components: free variables are singletons") {
    EcInstance inst{6, 3, {{1, 2, 3}}};
    auto comps = hypergraph_components(inst);
    REQUIRE(comps.size() == 4);
    CHECK(comps[0] == std::vector<std::int32_t>{1, 2, 3});
    CHECK(comps[1] == std::vector<std::int32_t>{4});
    CHECK(comps[3] == std::vector<std::int32_t>{6});
}

TEST_CASE("expected_Z: n=3, m=1, exact window at 1/3") {
    ExpectedZ z = expected_Z(3, 1, 3, {1.0 / 3.0, 0.0});
    CHECK(z.value == doctest::Approx(6.0).epsilon(1e-9));
    // the unique instance on n=3 must agree exactly
    EcInstance only{3, 3, {{1, 2, 3}}};
    CHECK(count_overlap_pairs(only, {1.0 / 3.0, 0.0}, true) == 6);
}

TEST_CASE("expected_Z: m=0 reduces to a multinomial sum") {
    const std::int32_t n = 8;
    OverlapWindow w{0.5, 1.0}; // agreements in [3, 5]
    ExpectedZ z = expected_Z(n, 0, 3, w);

    // independent sum with exact integer multinomials
    auto fact = [](std::int64_t x) {
        double f = 1.0;
        for (std::int64_t i = 2; i <= x; ++i) f *= static_cast<double>(i);
        return f;
    };
    double expect = 0.0;
    for (std::int64_t a = 0; a <= n; ++a)
        for (std::int64_t b = 0; a + b <= n; ++b)
            for (std::int64_t c = 0; a + b + c <= n; ++c) {
                std::int64_t d = n - a - b - c;
                if (!w.contains_agreements(a + d, n)) continue;
                expect += fact(n) / (fact(a) * fact(b) * fact(c) * fact(d));
            }
    CHECK(z.value == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("expected_Z matches Monte Carlo pair counts (n=8, m=2)") {
    const std::int32_t n = 8;
    const std::int64_t m = 2;
    OverlapWindow w{0.5, 0.4}; // agreements exactly 4
    ExpectedZ z = expected_Z(n, m, 3, w);

    const std::int64_t reps = 20000;
    std::vector<double> counts(reps);
    parallel_for(reps, 0, [&](std::int64_t i) {
        EcInstance inst = generate_instance(n, m, 3, {4242, static_cast<std::uint64_t>(i)});
        counts[static_cast<std::size_t>(i)] =
            static_cast<double>(count_overlap_pairs(inst, w, true));
    });
    double mean = 0.0;
    for (double c : counts) mean += c;
    mean /= reps;
    double var = 0.0;
    for (double c : counts) var += (c - mean) * (c - mean);
    var /= (reps - 1);
    double se = std::sqrt(var / reps);
    CHECK(std::abs(mean - z.value) <= 3.0 * se);
}

TEST_CASE("expected_Z: caps and parameter validation") {
    CHECK_THROWS_AS(expected_Z(300, 1, 3, {0.5, 1.0}), resource_limit);
    CHECK_THROWS_AS(expected_Z(2, 1, 3, {0.5, 1.0}), invalid_parameters);
}
