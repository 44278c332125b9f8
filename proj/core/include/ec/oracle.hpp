#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ec/assignment.hpp"
#include "ec/instance.hpp"

namespace ec {

// All satisfying assignments of one instance, in lexicographic order.
struct SolutionSet {
    std::int32_t n = 0;
    std::string instance_digest;
    std::vector<Assignment> solutions;

    std::int64_t size() const { return static_cast<std::int64_t>(solutions.size()); }
};

struct EnumerationOptions {
    std::int32_t max_n = 30; // hard cap; enumeration is exponential in n
};

// Complete, duplicate-free enumeration by backtracking with unit propagation
// on the 1-in-j clause counters. Throws resource_limit above the cap.
SolutionSet enumerate_solutions(const EcInstance& inst, EnumerationOptions opts = {});

// Ordered pairs (A,B) of solutions with overlap(A,B) inside the window.
// Pairs with A == B are counted only when include_equal is set.
std::int64_t count_overlap_pairs(const SolutionSet& sols, const OverlapWindow& window,
                                 bool include_equal);
std::int64_t count_overlap_pairs(const EcInstance& inst, const OverlapWindow& window,
                                 bool include_equal, EnumerationOptions opts = {});

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // reduced, den > 0

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
    friend bool operator==(const Rational&, const Rational&) = default;
};

// { overlap(A,B) : A, B distinct solutions }, ascending, exact rationals.
std::vector<Rational> overlap_support(const SolutionSet& sols);
std::vector<Rational> overlap_support(const EcInstance& inst, EnumerationOptions opts = {});

// Connected components of the graph on solutions with edges at Hamming
// distance <= l (the l-connectivity clusters).
struct ClusterReport {
    std::int32_t l = 0;
    std::vector<std::vector<std::int32_t>> components; // indices into the SolutionSet
    std::vector<std::int32_t> diameters;               // max pairwise Hamming per component
};

ClusterReport cluster_decomposition(const SolutionSet& sols, std::int32_t l);

// Variable components of the formula hypergraph (clauses as hyperedges);
// variables outside every clause are singletons. Components are ordered by
// smallest member, members sorted.
std::vector<std::vector<std::int32_t>> hypergraph_components(const EcInstance& inst);

// Path A = A_0, ..., A_s = B of satisfying assignments, flipping one
// hypergraph component at a time (so each step has Hamming distance at most
// the largest component size). Endpoints must satisfy the instance.
std::vector<Assignment> build_solution_path(const Assignment& a, const Assignment& b,
                                            const EcInstance& inst);

// Exact first-moment sum E[Z] = sum over quadruples (a,b,c,d) with
// a+b+c+d = n and (a+d)/n in the window of multinomial(n;a,b,c,d) P*^m.
struct ExpectedZ {
    double value = 0.0;
    double log_value = 0.0;
    std::int64_t quadruples = 0; // admissible quadruples actually summed
    double quadruple_bound = 0.0; // the closed-form bound M, diagnostic only
};

ExpectedZ expected_Z(std::int32_t n, std::int64_t m, std::int32_t k, const OverlapWindow& window,
                     std::int32_t max_n = 200);

} // namespace ec
