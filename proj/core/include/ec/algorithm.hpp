#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ec/assignment.hpp"
#include "ec/instance.hpp"
#include "ec/rng.hpp"
#include "ec/trajectory.hpp"

namespace ec {

// Per-call effect counts of one variable assignment.
struct EffectsReport {
    std::int32_t clauses_satisfied = 0; // removed because the variable went TRUE
    std::int32_t clauses_shrunk = 0;    // length j -> j-1 (j >= 3), still active
    std::int32_t pos_pushes = 0;        // 1-in-2 clauses collapsing to positive units
    std::int32_t neg_pushes = 0;        // forced-FALSE pushes from satisfied clauses
    bool contradiction = false;
    std::vector<std::int32_t> witness;  // members of the clause that clashed
};

// Mutable run state: active clauses bucketed by length, unit queues, partial
// assignment. Unit queues deduplicate same-sign pushes; an opposite-sign push
// or assignment is a contradiction. Confined to a single run/thread.
class WorkingFormula {
public:
    explicit WorkingFormula(const EcInstance& inst);

    // Assigns an unassigned variable and propagates through every active
    // clause containing it. TRUE satisfies the clause and forces the other
    // members FALSE; FALSE shrinks the clause, collapsing 1-in-2 clauses to
    // positive units.
    EffectsReport set_variable(std::int32_t v, bool value);

    std::int32_t n() const { return n_; }
    std::int32_t k() const { return k_; }
    std::int64_t count_of_length(std::int32_t j) const;
    std::int32_t max_long_length() const; // largest j >= 3 with active clauses, else 0
    std::int64_t pos_count() const { return static_cast<std::int64_t>(pos_queue_.size()); }
    std::int64_t neg_count() const { return static_cast<std::int64_t>(neg_queue_.size()); }
    std::int64_t free_count() const { return static_cast<std::int64_t>(free_vars_.size()); }
    std::int64_t assigned_count() const { return n_ - free_count(); }
    bool in_contradiction() const { return contradiction_; }
    const std::vector<std::int32_t>& contradiction_witness() const { return witness_; }

    bool assigned(std::int32_t v) const;
    bool value_of(std::int32_t v) const; // valid only when assigned

    bool queued_pos(std::int32_t v) const;
    bool queued_neg(std::int32_t v) const;

    // Deterministic (FIFO) and uniform-random queue service. The popped
    // variable is dequeued but not yet assigned.
    std::int32_t pop_pos_front();
    std::int32_t pop_neg_front();
    std::int32_t pop_pos_random(Rng& rng);
    std::int32_t pop_neg_random(Rng& rng);

    std::int32_t random_free_variable(Rng& rng) const;
    // Uniform over the multiset of active clauses of the given length;
    // returns a uniformly random member of that clause.
    std::int32_t random_member_of_random_clause(std::int32_t length, Rng& rng);

    // Push a variable onto a unit queue directly (test hook; run code pushes
    // through set_variable).
    void push_pos(std::int32_t v);
    void push_neg(std::int32_t v);

    // Snapshot of the active clauses of one length (testing/diagnostics).
    std::vector<Clause> active_clauses(std::int32_t length) const;

    const std::vector<std::int32_t>& free_variables() const { return free_vars_; }

private:
    struct ClauseState {
        std::vector<std::int32_t> members;
        bool active = true;
    };

    void bucket_add(std::int32_t len, std::int32_t cid);
    void bucket_remove(std::int32_t len, std::int32_t cid);
    void remove_free(std::int32_t v);
    void queue_remove(std::vector<std::int32_t>& queue, std::int32_t v);
    void fail_with(std::vector<std::int32_t> witness);

    std::int32_t n_ = 0;
    std::int32_t k_ = 0;
    std::vector<ClauseState> clauses_;
    std::vector<std::vector<std::int32_t>> buckets_;    // by length, 0..k
    std::vector<std::int32_t> bucket_pos_;              // clause id -> slot in its bucket
    std::vector<std::vector<std::int32_t>> occurrence_; // var -> clause ids (static)
    enum class VarState : std::int8_t { free_var, queued_pos, queued_neg, assigned };
    std::vector<VarState> var_state_;
    std::vector<std::int8_t> var_value_;
    std::vector<std::int32_t> pos_queue_, neg_queue_;
    std::vector<std::int32_t> queue_pos_;
    std::vector<std::int32_t> free_vars_;
    std::vector<std::int32_t> free_pos_;
    bool contradiction_ = false;
    std::vector<std::int32_t> witness_;
};

// --- run results --------------------------------------------------------------

enum class FailReason { contradiction, non_bipartite, oversized_component };

const char* to_string(FailReason r);

struct RunPair {
    Assignment a;
    Assignment b;
    std::vector<std::vector<std::int32_t>> components; // endgame components (variables)
};

struct RunFailure {
    FailReason reason = FailReason::contradiction;
    std::int64_t step = 0;
};

struct EndgameStats {
    std::int64_t graph_vertices = 0; // unassigned variables at the endgame
    std::int64_t graph_edges = 0;    // residual 1-in-2 clauses (multiplicity kept)
    std::int64_t max_component = 0;
    bool bipartite = false;
    bool reached = false;
};

struct StepEvent {
    std::int64_t step = 0;
    std::int32_t branch = 0; // 1,2,3 lazy branches; 0 for drain/endgame
    std::int32_t variable = 0;
    bool value = false;
    std::int64_t c3 = 0;
    std::int64_t c2 = 0;
    std::int64_t p = 0;
    std::int64_t n = 0;
};

struct RunResult {
    std::variant<RunPair, RunFailure> outcome;
    TrajectoryCurve trajectory; // mode "empirical"; empty unless recording
    double t2_emp = 0.0;        // scaled time at which clauses of length >= 3 ran out
    double raw_overlap = 0.0;   // overlap(a, b) before any tuning (success only)
    EndgameStats stats;

    bool success() const { return std::holds_alternative<RunPair>(outcome); }
    const RunPair* pair() const { return std::get_if<RunPair>(&outcome); }
    const RunFailure* failure() const { return std::get_if<RunFailure>(&outcome); }
};

struct RunOptions {
    bool record = false;
    // After the long clauses run out, queues are drained deterministically by
    // default; keep_lazy keeps drawing lazy branches (branch 3 redrawn among
    // the unit branches) until the queues empty.
    bool keep_lazy_drain = false;
    std::function<double(std::int64_t)> f_n;          // component cap; default (ln n)^2
    std::function<void(const StepEvent&)> step_log;   // optional
};

double default_f_n(std::int64_t n);

// The lazy variant: each step draws a branch from the schedule, serves the
// matching unit queue (or a random free variable when the queue is empty), or
// shortens a random maximal-length clause.
RunResult run_lazy(const EcInstance& inst, const Schedule& schedule, RngSpec rng,
                   RunOptions options = {});

// Deterministic priority: unit clauses first, then a random maximal-length
// clause, then the 2-XOR endgame.
RunResult run_largest_clause(const EcInstance& inst, RngSpec rng, RunOptions options = {});

// --- 2-XOR endgame --------------------------------------------------------------

struct EndgameOutcome {
    bool ok = false;
    FailReason fail_reason = FailReason::non_bipartite;
    Assignment a_partial; // full length; meaningful on endgame variables only
    Assignment b_partial;
    std::vector<std::vector<std::int32_t>> components;
    EndgameStats stats;
};

// Builds the disequality graph from the residual 1-in-2 clauses, checks
// bipartiteness and the component-size cap, and produces the two opposite
// colorings (component representative TRUE in A, FALSE in B). Isolated free
// variables are singleton components.
EndgameOutcome endgame_2xor(const WorkingFormula& wf,
                            const std::function<double(std::int64_t)>& f_n);

// --- overlap tuning ---------------------------------------------------------------

struct TuneResult {
    bool ok = false;
    Assignment a;
    Assignment b;
    std::int64_t flipped_components = 0;
    std::string error; // "window-unreachable" detail on failure
};

// Flips whole endgame components of B to agree with A (greedy, largest first)
// until the overlap enters the window. Reachable for any target at or above
// the raw overlap when component sizes stay below the window's epsilon.
TuneResult tune_overlap(const RunResult& result, const OverlapWindow& window);

} // namespace ec
