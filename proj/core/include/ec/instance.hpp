#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ec/assignment.hpp"
#include "ec/rng.hpp"

namespace ec {

using Clause = std::vector<std::int32_t>; // sorted, k distinct 1-based indices

// A 1-in-k formula: an ordered multiset of k-subsets of {1, ..., n}.
// Duplicate clauses are allowed (the random model samples with replacement).
struct EcInstance {
    std::int32_t n = 0;
    std::int32_t k = 0;
    std::vector<Clause> clauses;

    std::int64_t m() const { return static_cast<std::int64_t>(clauses.size()); }

    // Checks every structural invariant; throws invalid_parameters on the
    // first violation.
    void validate() const;
};

// m clauses sampled i.i.d. uniformly from all C(n,k) k-subsets.
EcInstance generate_instance(std::int32_t n, std::int64_t m, std::int32_t k, RngSpec rng);

// True iff every clause has exactly one variable TRUE under a.
bool satisfies(const Assignment& a, const EcInstance& inst);

// Per-clause counts of variables in the classes A=B=0, A=0 B=1, A=1 B=0, A=B=1.
struct ClausePairProfile {
    std::int32_t c0 = 0;
    std::int32_t c1 = 0;
    std::int32_t c2 = 0;
    std::int32_t c3 = 0;

    friend bool operator==(const ClausePairProfile&, const ClausePairProfile&) = default;
};

struct ClausePairResult {
    ClausePairProfile profile;
    bool both_satisfied = false;
};

// both_satisfied is true iff (c0=k-2, c1=c2=1, c3=0) or (c0=k-1, c1=c2=0, c3=1),
// which is equivalent to both assignments satisfying the clause individually.
ClausePairResult clause_pair_profile(const Clause& clause, const Assignment& a,
                                     const Assignment& b);

// --- Instance text format -------------------------------------------------
//
//   # comment lines are ignored
//   p ec <n> <m> <k>
//   <k space-separated 1-based indices>   (m lines, sorted within each line)

std::string write_instance(const EcInstance& inst);
void write_instance(std::ostream& out, const EcInstance& inst);

EcInstance parse_instance(const std::string& text);
EcInstance parse_instance(std::istream& in);
EcInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const EcInstance& inst);

// FNV-1a over the canonical text rendering; identifies an instance in manifests.
std::string instance_digest(const EcInstance& inst);

} // namespace ec
