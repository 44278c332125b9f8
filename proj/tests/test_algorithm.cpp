#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ec/algorithm.hpp"
#include "ec/errors.hpp"
#include "ec/oracle.hpp"

using namespace ec;

namespace {

EcInstance single_clause() { return EcInstance{3, 3, {{1, 2, 3}}}; }

// No satisfying assignment: every run of either algorithm must fail.
EcInstance unsat_instance() {
    return EcInstance{4, 3, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}};
}

double no_cap(std::int64_t n) { return static_cast<double>(n) + 1.0; }

bool same_run(const RunResult& x, const RunResult& y) {
    if (x.success() != y.success()) return false;
    if (x.success()) {
        if (!(x.pair()->a == y.pair()->a) || !(x.pair()->b == y.pair()->b)) return false;
        if (x.pair()->components != y.pair()->components) return false;
    } else {
        if (x.failure()->reason != y.failure()->reason) return false;
        if (x.failure()->step != y.failure()->step) return false;
    }
    if (x.t2_emp != y.t2_emp) return false;
    if (x.stats.graph_edges != y.stats.graph_edges) return false;
    if (x.stats.graph_vertices != y.stats.graph_vertices) return false;
    if (x.trajectory.samples.size() != y.trajectory.samples.size()) return false;
    for (std::size_t i = 0; i < x.trajectory.samples.size(); ++i) {
        if (x.trajectory.samples[i].c3 != y.trajectory.samples[i].c3) return false;
        if (x.trajectory.samples[i].c2 != y.trajectory.samples[i].c2) return false;
    }
    return true;
}

} // namespace

TEST_CASE("set_variable: TRUE satisfies the clause and queues the rest FALSE") {
    WorkingFormula wf(single_clause());
    EffectsReport rep = wf.set_variable(1, true);
    CHECK(rep.clauses_satisfied == 1);
    CHECK(rep.neg_pushes == 2);
    CHECK_FALSE(rep.contradiction);
    CHECK(wf.count_of_length(3) == 0);
    CHECK(wf.count_of_length(2) == 0);
    CHECK(wf.queued_neg(2));
    CHECK(wf.queued_neg(3));
    CHECK(wf.neg_count() == 2);
    CHECK(wf.free_count() == 2);
}

TEST_CASE("set_variable: FALSE shrinks the clause") {
    WorkingFormula wf(single_clause());
    EffectsReport rep = wf.set_variable(1, false);
    CHECK(rep.clauses_shrunk == 1);
    CHECK(wf.count_of_length(3) == 0);
    CHECK(wf.count_of_length(2) == 1);
    CHECK(wf.active_clauses(2) == std::vector<Clause>{{2, 3}});
    CHECK(wf.pos_count() == 0);

    // shrinking a 1-in-2 clause yields a positive unit
    EffectsReport rep2 = wf.set_variable(2, false);
    CHECK(rep2.pos_pushes == 1);
    CHECK(wf.queued_pos(3));
    CHECK(wf.count_of_length(2) == 0);
}

TEST_CASE("set_variable: queued variable set with the opposite sign is a contradiction") {
    // clauses {1,2,3}, {2,4,5}: shrink the first to {1,2}, queue 2 negative
    // via the second, then force 2 positive
    EcInstance inst{5, 3, {{1, 2, 3}, {2, 4, 5}}};
    WorkingFormula wf(inst);
    wf.set_variable(3, false);
    wf.set_variable(4, true); // satisfies {2,4,5}; queues 2 and 5 FALSE
    CHECK(wf.queued_neg(2));
    EffectsReport rep = wf.set_variable(1, false); // {1,2} collapses, pos push of 2
    CHECK(rep.contradiction);
    CHECK(wf.in_contradiction());
}

TEST_CASE("set_variable: direct opposite-sign assignment of a queued variable fails") {
    WorkingFormula wf(single_clause());
    wf.set_variable(1, true); // queues 2,3 FALSE
    EffectsReport rep = wf.set_variable(2, true);
    CHECK(rep.contradiction);
    CHECK(rep.witness == std::vector<std::int32_t>{2});
}

TEST_CASE("set_variable: same-sign assignment of a queued variable is a service") {
    WorkingFormula wf(single_clause());
    wf.set_variable(1, true);
    EffectsReport rep = wf.set_variable(2, false);
    CHECK_FALSE(rep.contradiction);
    CHECK(wf.neg_count() == 1); // only 3 remains queued
    CHECK(wf.assigned(2));
}

TEST_CASE("set_variable: duplicate pushes deduplicate") {
    EcInstance inst{4, 3, {{1, 2, 3}, {1, 2, 4}}};
    WorkingFormula wf(inst);
    EffectsReport rep = wf.set_variable(1, true); // both clauses satisfied
    CHECK(rep.clauses_satisfied == 2);
    CHECK_FALSE(rep.contradiction);
    CHECK(wf.neg_count() == 3); // 2 queued once, plus 3 and 4
}

TEST_CASE("set_variable: assigning twice is a usage error") {
    WorkingFormula wf(single_clause());
    wf.set_variable(1, false);
    CHECK_THROWS_AS(wf.set_variable(1, true), invalid_parameters);
    CHECK_THROWS_AS(wf.set_variable(0, true), invalid_parameters);
}

TEST_CASE("endgame: single residual edge takes opposite colors") {
    WorkingFormula wf(single_clause());
    wf.set_variable(3, false); // residual 1-in-2 on {1,2}
    EndgameOutcome eo = endgame_2xor(wf, no_cap);
    REQUIRE(eo.ok);
    CHECK(eo.a_partial.get(1));
    CHECK_FALSE(eo.a_partial.get(2));
    CHECK_FALSE(eo.b_partial.get(1));
    CHECK(eo.b_partial.get(2));
    REQUIRE(eo.components.size() == 1);
    CHECK(eo.components[0] == std::vector<std::int32_t>{1, 2});
    CHECK(eo.stats.graph_edges == 1);
    CHECK(eo.stats.graph_vertices == 2);
}

TEST_CASE("endgame: a triangle of disequalities is not bipartite") {
    EcInstance inst{6, 3, {{1, 2, 4}, {2, 3, 5}, {1, 3, 6}}};
    WorkingFormula wf(inst);
    wf.set_variable(4, false);
    wf.set_variable(5, false);
    wf.set_variable(6, false);
    CHECK(wf.count_of_length(2) == 3);
    EndgameOutcome eo = endgame_2xor(wf, no_cap);
    CHECK_FALSE(eo.ok);
    CHECK(eo.fail_reason == FailReason::non_bipartite);
}

TEST_CASE("endgame: 5-vertex path, component cap, proper colorings") {
    EcInstance inst{9, 3, {{1, 2, 6}, {2, 3, 7}, {3, 4, 8}, {4, 5, 9}}};
    WorkingFormula wf(inst);
    for (std::int32_t v : {6, 7, 8, 9}) wf.set_variable(v, false);

    EndgameOutcome eo = endgame_2xor(wf, no_cap);
    REQUIRE(eo.ok);
    REQUIRE(eo.components.size() == 1);
    CHECK(eo.components[0] == std::vector<std::int32_t>{1, 2, 3, 4, 5});
    CHECK(eo.stats.max_component == 5);
    // both colorings satisfy all four disequalities and are opposite
    for (auto [x, y] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}, {4, 5}}) {
        CHECK(eo.a_partial.get(x) != eo.a_partial.get(y));
        CHECK(eo.b_partial.get(x) != eo.b_partial.get(y));
    }
    for (int v = 1; v <= 5; ++v) CHECK(eo.a_partial.get(v) != eo.b_partial.get(v));

    // a cap at exactly the component size triggers the failure
    EndgameOutcome capped = endgame_2xor(wf, [](std::int64_t) { return 5.0; });
    CHECK_FALSE(capped.ok);
    CHECK(capped.fail_reason == FailReason::oversized_component);
}

TEST_CASE("endgame: requires a drained formula") {
    WorkingFormula wf(single_clause());
    CHECK_THROWS_AS(endgame_2xor(wf, no_cap), invalid_parameters);
}

TEST_CASE("run_lazy: empty formula pairs are opposite everywhere") {
    EcInstance inst{8, 3, {}};
    RunOptions opts;
    RunResult res = run_lazy(inst, make_schedule_default(), {3, 0}, opts);
    REQUIRE(res.success());
    CHECK(res.t2_emp == 0.0);
    const RunPair& p = *res.pair();
    CHECK(p.components.size() == 8);
    for (std::int32_t v = 1; v <= 8; ++v) CHECK(p.a.get(v) != p.b.get(v));
    CHECK(res.raw_overlap == 0.0);
    CHECK(res.stats.graph_edges == 0);
    CHECK(res.stats.graph_vertices == 8);
}

TEST_CASE("run_lazy: single clause always yields satisfying pairs") {
    EcInstance inst = single_clause();
    SolutionSet sols = enumerate_solutions(inst);
    std::set<std::string> sol_strings;
    for (const Assignment& a : sols.solutions) sol_strings.insert(a.to_string());

    RunOptions opts;
    opts.f_n = no_cap;
    int successes = 0;
    for (std::uint64_t stream = 0; stream < 50; ++stream) {
        RunResult res = run_lazy(inst, make_schedule_default(), {11, stream}, opts);
        if (!res.success()) continue;
        ++successes;
        CHECK(satisfies(res.pair()->a, inst));
        CHECK(satisfies(res.pair()->b, inst));
        CHECK(sol_strings.count(res.pair()->a.to_string()) == 1);
        CHECK(sol_strings.count(res.pair()->b.to_string()) == 1);
    }
    CHECK(successes == 50);
}

TEST_CASE("run_lazy: deterministic for a fixed rng spec") {
    EcInstance inst = generate_instance(200, 20, 3, {5, 9});
    RunOptions opts;
    opts.record = true;
    RunResult a = run_lazy(inst, make_schedule_default(), {123, 7}, opts);
    RunResult b = run_lazy(inst, make_schedule_default(), {123, 7}, opts);
    CHECK(same_run(a, b));
    RunResult c = run_lazy(inst, make_schedule_default(), {123, 8}, opts);
    CHECK_FALSE(same_run(a, c)); // different stream, different trajectory
}

TEST_CASE("run_lazy: keep-lazy drain mode also completes") {
    EcInstance inst = generate_instance(300, 30, 3, {6, 2});
    RunOptions opts;
    opts.keep_lazy_drain = true;
    int successes = 0;
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
        RunResult res = run_lazy(inst, make_schedule_default(), {21, stream}, opts);
        if (res.success()) {
            ++successes;
            CHECK(satisfies(res.pair()->a, inst));
            CHECK(satisfies(res.pair()->b, inst));
        }
    }
    CHECK(successes > 0);
}

TEST_CASE("run_lazy: disagreement set equals the endgame variable set") {
    EcInstance inst = generate_instance(400, 40, 3, {31, 1});
    RunResult res = run_lazy(inst, make_schedule_default(), {32, 0});
    if (res.success()) {
        std::set<std::int32_t> comp_vars;
        for (const auto& comp : res.pair()->components)
            comp_vars.insert(comp.begin(), comp.end());
        for (std::int32_t v = 1; v <= inst.n; ++v) {
            bool differs = res.pair()->a.get(v) != res.pair()->b.get(v);
            CHECK(differs == (comp_vars.count(v) == 1));
        }
        CHECK(res.stats.graph_vertices == static_cast<std::int64_t>(comp_vars.size()));
    }
}

TEST_CASE("run_largest_clause: every run on the unsat instance hits a contradiction") {
    EcInstance inst = unsat_instance();
    CHECK(enumerate_solutions(inst).size() == 0); // verified unsatisfiable
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
        RunResult res = run_largest_clause(inst, {55, stream});
        REQUIRE_FALSE(res.success());
        CHECK(res.failure()->reason == FailReason::contradiction);
    }
}

TEST_CASE("run_largest_clause: m=0 behaves like run_lazy") {
    EcInstance inst{5, 3, {}};
    RunResult res = run_largest_clause(inst, {1, 0});
    REQUIRE(res.success());
    for (std::int32_t v = 1; v <= 5; ++v) CHECK(res.pair()->a.get(v) != res.pair()->b.get(v));
}

TEST_CASE("run_largest_clause: units are always served first") {
    EcInstance inst = generate_instance(120, 14, 3, {71, 3});
    std::vector<StepEvent> log;
    RunOptions opts;
    opts.step_log = [&](const StepEvent& e) { log.push_back(e); };
    RunResult res = run_largest_clause(inst, {72, 0}, opts);
    (void)res;
    std::int64_t prev_units = 0; // initial queues are empty
    for (const StepEvent& e : log) {
        if (prev_units > 0) CHECK((e.branch == 1 || e.branch == 2));
        prev_units = e.p + e.n;
    }
}

TEST_CASE("run_lazy: satisfying pairs at moderate size, stats populated") {
    EcInstance inst = generate_instance(2000, 200, 3, {81, 0});
    RunOptions opts;
    opts.record = true;
    int successes = 0;
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
        RunResult res = run_lazy(inst, make_schedule_default(), {82, stream}, opts);
        if (!res.success()) continue;
        ++successes;
        CHECK(satisfies(res.pair()->a, inst));
        CHECK(satisfies(res.pair()->b, inst));
        CHECK(res.t2_emp > 0.1);
        CHECK(res.t2_emp < 0.35);
        CHECK(res.stats.bipartite);
        CHECK_FALSE(res.trajectory.samples.empty());
    }
    CHECK(successes >= 5);
}

TEST_CASE("tune_overlap: worked subset-sum example") {
    RunPair pair;
    pair.a = Assignment(10, true);
    pair.b = Assignment(10, false);
    pair.components = {{1, 2}, {3, 4}, {5, 6, 7}, {8, 9, 10}};
    RunResult res;
    res.outcome = pair;

    TuneResult tuned = tune_overlap(res, {0.5, 0.4});
    REQUIRE(tuned.ok);
    CHECK(tuned.flipped_components == 2); // one size-3 and one size-2 component
    CHECK(overlap_and_distance(tuned.a, tuned.b).overlap == doctest::Approx(0.5));

    // q = 1 flips everything
    TuneResult all = tune_overlap(res, {1.0, 0.0});
    REQUIRE(all.ok);
    CHECK(all.b == all.a);
    CHECK(all.flipped_components == 4);

    // a window already containing the raw overlap needs no flips
    TuneResult none = tune_overlap(res, {0.05, 0.5});
    REQUIRE(none.ok);
    CHECK(none.flipped_components == 0);
    CHECK(none.b == pair.b);
}

TEST_CASE("tune_overlap: unreachable windows fail") {
    RunPair pair;
    pair.a = Assignment(10, true);
    pair.b = pair.a;
    for (std::int32_t v : {1, 2}) pair.b.set(v, false);
    pair.components = {{1, 2}};
    RunResult res;
    res.outcome = pair;
    // raw overlap 0.8; the window sits below it
    TuneResult below = tune_overlap(res, {0.3, 0.1});
    CHECK_FALSE(below.ok);
    CHECK(below.error.find("window-unreachable") != std::string::npos);

    // coarse components cannot land in a narrow window
    RunPair coarse;
    coarse.a = Assignment(10, true);
    coarse.b = Assignment(10, false);
    coarse.components = {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}};
    RunResult res2;
    res2.outcome = coarse;
    TuneResult granular = tune_overlap(res2, {0.3, 0.5});
    CHECK_FALSE(granular.ok);
}

TEST_CASE("tune_overlap: tuned pairs still satisfy the instance") {
    EcInstance inst = generate_instance(3000, 300, 3, {91, 0});
    for (std::uint64_t stream = 0; stream < 6; ++stream) {
        RunResult res = run_lazy(inst, make_schedule_default(), {92, stream});
        if (!res.success()) continue;
        double eps = OverlapWindow::default_epsilon(inst.n);
        for (double q : {res.raw_overlap + 0.05, 0.5, 0.9}) {
            TuneResult tuned = tune_overlap(res, {q, eps});
            REQUIRE(tuned.ok);
            CHECK(satisfies(tuned.a, inst));
            CHECK(satisfies(tuned.b, inst));
            CHECK(OverlapWindow{q, eps}.contains(
                overlap_and_distance(tuned.a, tuned.b).overlap, inst.n));
        }
    }
}

TEST_CASE("uniformity smoke test: occurrence counts are index-symmetric") {
    // Drive the lazy loop for 12 steps on fresh random instances and tally,
    // per variable index, occurrences in the active 3-clauses.
    const std::int32_t n = 60;
    const std::int64_t m = 30;
    const int runs = 1500;
    const int steps = 12;
    std::vector<double> occ(static_cast<std::size_t>(n) + 1, 0.0);
    Schedule sched = make_schedule_default();
    for (int run = 0; run < runs; ++run) {
        EcInstance inst = generate_instance(n, m, 3, {4000, static_cast<std::uint64_t>(run)});
        WorkingFormula wf(inst);
        Rng rng({4001, static_cast<std::uint64_t>(run)});
        for (int s = 0; s < steps && wf.max_long_length() != 0 && !wf.in_contradiction(); ++s) {
            double t = static_cast<double>(s) / n;
            double u = rng.uniform01() *
                       (sched.lambda1(t) + sched.lambda2(t) + sched.lambda3(t));
            if (u < sched.lambda1(t)) {
                wf.set_variable(wf.pos_count() > 0 ? wf.pop_pos_random(rng)
                                                   : wf.random_free_variable(rng),
                                true);
            } else if (u < sched.lambda1(t) + sched.lambda2(t)) {
                wf.set_variable(wf.neg_count() > 0 ? wf.pop_neg_random(rng)
                                                   : wf.random_free_variable(rng),
                                false);
            } else {
                wf.set_variable(wf.random_member_of_random_clause(wf.max_long_length(), rng),
                                false);
            }
        }
        if (wf.in_contradiction()) continue;
        for (const Clause& c : wf.active_clauses(3)) {
            for (std::int32_t v : c) occ[static_cast<std::size_t>(v)] += 1.0;
        }
    }
    double total = 0.0;
    for (std::int32_t v = 1; v <= n; ++v) total += occ[static_cast<std::size_t>(v)];
    double expected = total / n;
    REQUIRE(expected > 100.0);
    double chi2 = 0.0;
    for (std::int32_t v = 1; v <= n; ++v) {
        double diff = occ[static_cast<std::size_t>(v)] - expected;
        chi2 += diff * diff / expected;
    }
    // df = 59: mean 59, sd sqrt(118); generous +-5 sigma window for a seeded run
    CHECK(chi2 < 59.0 + 5.0 * std::sqrt(118.0));
    CHECK(chi2 > 59.0 - 5.0 * std::sqrt(118.0));
}
