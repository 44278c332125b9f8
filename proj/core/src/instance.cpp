#include "ec/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ec/errors.hpp"

namespace ec {

void EcInstance::validate() const {
    if (n <= 0) throw invalid_parameters("instance: n must be positive");
    if (k < 3) throw invalid_parameters("instance: k must be >= 3");
    if (k > n) throw invalid_parameters("instance: k must not exceed n");
    for (const Clause& c : clauses) {
        if (static_cast<std::int32_t>(c.size()) != k) {
            throw invalid_parameters("instance: clause width differs from k");
        }
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] < 1 || c[i] > n) throw invalid_parameters("instance: variable out of range");
            if (i > 0 && c[i] <= c[i - 1]) {
                throw invalid_parameters("instance: clause members must be sorted and distinct");
            }
        }
    }
}

EcInstance generate_instance(std::int32_t n, std::int64_t m, std::int32_t k, RngSpec spec) {
    if (n <= 0) throw invalid_parameters("generate_instance: n must be positive");
    if (m < 0) throw invalid_parameters("generate_instance: m must be nonnegative");
    if (k < 3) throw invalid_parameters("generate_instance: k must be >= 3");
    if (k > n) throw invalid_parameters("generate_instance: k must not exceed n");

    Rng rng(spec);
    EcInstance inst;
    inst.n = n;
    inst.k = k;
    inst.clauses.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        Clause c = rng.sample_distinct(n, k);
        for (auto& v : c) ++v; // 0-based sample -> 1-based variables
        inst.clauses.push_back(std::move(c));
    }
    return inst;
}

bool satisfies(const Assignment& a, const EcInstance& inst) {
    if (a.size() != inst.n) throw invalid_parameters("satisfies: assignment length mismatch");
    for (const Clause& c : inst.clauses) {
        std::int32_t trues = 0;
        for (std::int32_t v : c) {
            trues += a.get(v) ? 1 : 0;
            if (trues > 1) break;
        }
        if (trues != 1) return false;
    }
    return true;
}

ClausePairResult clause_pair_profile(const Clause& clause, const Assignment& a,
                                     const Assignment& b) {
    if (a.size() != b.size()) {
        throw invalid_parameters("clause_pair_profile: length mismatch");
    }
    ClausePairResult r;
    for (std::int32_t v : clause) {
        bool av = a.get(v);
        bool bv = b.get(v);
        if (!av && !bv) ++r.profile.c0;
        else if (!av && bv) ++r.profile.c1;
        else if (av && !bv) ++r.profile.c2;
        else ++r.profile.c3;
    }
    auto k = static_cast<std::int32_t>(clause.size());
    const ClausePairProfile& p = r.profile;
    r.both_satisfied = (p.c0 == k - 2 && p.c1 == 1 && p.c2 == 1 && p.c3 == 0) ||
                       (p.c0 == k - 1 && p.c1 == 0 && p.c2 == 0 && p.c3 == 1);
    return r;
}

void write_instance(std::ostream& out, const EcInstance& inst) {
    out << "p ec " << inst.n << ' ' << inst.m() << ' ' << inst.k << '\n';
    for (const Clause& c : inst.clauses) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i > 0) out << ' ';
            out << c[i];
        }
        out << '\n';
    }
}

std::string write_instance(const EcInstance& inst) {
    std::ostringstream oss;
    write_instance(oss, inst);
    return oss.str();
}

EcInstance parse_instance(std::istream& in) {
    EcInstance inst;
    std::string line;
    std::int64_t m = -1;
    std::int64_t seen = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string p, ecfmt;
            ls >> p >> ecfmt >> inst.n >> m >> inst.k;
            if (!ls || p != "p" || ecfmt != "ec") {
                throw invalid_parameters("parse_instance: expected header 'p ec <n> <m> <k>'");
            }
            if (m < 0) throw invalid_parameters("parse_instance: negative clause count");
            have_header = true;
            inst.clauses.reserve(static_cast<std::size_t>(m));
            continue;
        }
        Clause c;
        c.reserve(static_cast<std::size_t>(inst.k));
        std::int32_t v;
        while (ls >> v) c.push_back(v);
        if (static_cast<std::int32_t>(c.size()) != inst.k) {
            throw invalid_parameters("parse_instance: clause line with wrong width");
        }
        std::sort(c.begin(), c.end());
        inst.clauses.push_back(std::move(c));
        if (++seen > m) throw invalid_parameters("parse_instance: more clauses than header says");
    }
    if (!have_header) throw invalid_parameters("parse_instance: missing header");
    if (seen != m) throw invalid_parameters("parse_instance: fewer clauses than header says");
    inst.validate();
    return inst;
}

EcInstance parse_instance(const std::string& text) {
    std::istringstream iss(text);
    return parse_instance(iss);
}

EcInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameters("load_instance: cannot open " + path);
    return parse_instance(in);
}

void save_instance(const std::string& path, const EcInstance& inst) {
    std::ofstream out(path);
    if (!out) throw invalid_parameters("save_instance: cannot open " + path);
    write_instance(out, inst);
}

std::string instance_digest(const EcInstance& inst) {
    std::string text = write_instance(inst);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace ec
