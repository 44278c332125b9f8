#include "ec/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ec/errors.hpp"

namespace ec {

const char* to_string(FailReason r) {
    switch (r) {
        case FailReason::contradiction: return "contradiction";
        case FailReason::non_bipartite: return "non-bipartite";
        case FailReason::oversized_component: return "oversized-component";
    }
    return "unknown";
}

double default_f_n(std::int64_t n) {
    double l = std::log(static_cast<double>(n));
    return l * l;
}

// --- WorkingFormula -----------------------------------------------------------

WorkingFormula::WorkingFormula(const EcInstance& inst) {
    inst.validate();
    n_ = inst.n;
    k_ = inst.k;
    clauses_.reserve(inst.clauses.size());
    buckets_.assign(static_cast<std::size_t>(k_) + 1, {});
    bucket_pos_.assign(inst.clauses.size(), -1);
    occurrence_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (std::size_t cid = 0; cid < inst.clauses.size(); ++cid) {
        clauses_.push_back({inst.clauses[cid], true});
        bucket_add(k_, static_cast<std::int32_t>(cid));
        for (std::int32_t v : inst.clauses[cid]) {
            occurrence_[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(cid));
        }
    }
    var_state_.assign(static_cast<std::size_t>(n_) + 1, VarState::free_var);
    var_value_.assign(static_cast<std::size_t>(n_) + 1, -1);
    queue_pos_.assign(static_cast<std::size_t>(n_) + 1, -1);
    free_pos_.assign(static_cast<std::size_t>(n_) + 1, -1);
    free_vars_.reserve(static_cast<std::size_t>(n_));
    for (std::int32_t v = 1; v <= n_; ++v) {
        free_pos_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(free_vars_.size());
        free_vars_.push_back(v);
    }
}

void WorkingFormula::bucket_add(std::int32_t len, std::int32_t cid) {
    auto& b = buckets_[static_cast<std::size_t>(len)];
    bucket_pos_[static_cast<std::size_t>(cid)] = static_cast<std::int32_t>(b.size());
    b.push_back(cid);
}

void WorkingFormula::bucket_remove(std::int32_t len, std::int32_t cid) {
    auto& b = buckets_[static_cast<std::size_t>(len)];
    std::int32_t pos = bucket_pos_[static_cast<std::size_t>(cid)];
    std::int32_t last = b.back();
    b[static_cast<std::size_t>(pos)] = last;
    bucket_pos_[static_cast<std::size_t>(last)] = pos;
    b.pop_back();
    bucket_pos_[static_cast<std::size_t>(cid)] = -1;
}

void WorkingFormula::remove_free(std::int32_t v) {
    std::int32_t pos = free_pos_[static_cast<std::size_t>(v)];
    std::int32_t last = free_vars_.back();
    free_vars_[static_cast<std::size_t>(pos)] = last;
    free_pos_[static_cast<std::size_t>(last)] = pos;
    free_vars_.pop_back();
    free_pos_[static_cast<std::size_t>(v)] = -1;
}

void WorkingFormula::queue_remove(std::vector<std::int32_t>& queue, std::int32_t v) {
    std::int32_t pos = queue_pos_[static_cast<std::size_t>(v)];
    std::int32_t last = queue.back();
    queue[static_cast<std::size_t>(pos)] = last;
    queue_pos_[static_cast<std::size_t>(last)] = pos;
    queue.pop_back();
    queue_pos_[static_cast<std::size_t>(v)] = -1;
}

void WorkingFormula::fail_with(std::vector<std::int32_t> witness) {
    contradiction_ = true;
    witness_ = std::move(witness);
}

bool WorkingFormula::assigned(std::int32_t v) const {
    return var_state_[static_cast<std::size_t>(v)] == VarState::assigned;
}

bool WorkingFormula::value_of(std::int32_t v) const {
    return var_value_[static_cast<std::size_t>(v)] == 1;
}

bool WorkingFormula::queued_pos(std::int32_t v) const {
    return var_state_[static_cast<std::size_t>(v)] == VarState::queued_pos;
}

bool WorkingFormula::queued_neg(std::int32_t v) const {
    return var_state_[static_cast<std::size_t>(v)] == VarState::queued_neg;
}

std::int64_t WorkingFormula::count_of_length(std::int32_t j) const {
    if (j < 0 || j > k_) return 0;
    return static_cast<std::int64_t>(buckets_[static_cast<std::size_t>(j)].size());
}

std::int32_t WorkingFormula::max_long_length() const {
    for (std::int32_t j = k_; j >= 3; --j) {
        if (!buckets_[static_cast<std::size_t>(j)].empty()) return j;
    }
    return 0;
}

void WorkingFormula::push_pos(std::int32_t v) {
    switch (var_state_[static_cast<std::size_t>(v)]) {
        case VarState::free_var:
            var_state_[static_cast<std::size_t>(v)] = VarState::queued_pos;
            queue_pos_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(pos_queue_.size());
            pos_queue_.push_back(v);
            break;
        case VarState::queued_pos:
            break; // duplicate push
        case VarState::queued_neg:
            fail_with({v});
            break;
        case VarState::assigned:
            if (var_value_[static_cast<std::size_t>(v)] != 1) fail_with({v});
            break;
    }
}

void WorkingFormula::push_neg(std::int32_t v) {
    switch (var_state_[static_cast<std::size_t>(v)]) {
        case VarState::free_var:
            var_state_[static_cast<std::size_t>(v)] = VarState::queued_neg;
            queue_pos_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(neg_queue_.size());
            neg_queue_.push_back(v);
            break;
        case VarState::queued_neg:
            break;
        case VarState::queued_pos:
            fail_with({v});
            break;
        case VarState::assigned:
            if (var_value_[static_cast<std::size_t>(v)] != 0) fail_with({v});
            break;
    }
}

EffectsReport WorkingFormula::set_variable(std::int32_t v, bool value) {
    if (v < 1 || v > n_) throw invalid_parameters("set_variable: variable out of range");
    if (assigned(v)) throw invalid_parameters("set_variable: variable already assigned");
    EffectsReport rep;

    VarState st = var_state_[static_cast<std::size_t>(v)];
    if ((st == VarState::queued_pos && !value) || (st == VarState::queued_neg && value)) {
        // falsifies the queued 1-in-1 clause on v
        fail_with({v});
        rep.contradiction = true;
        rep.witness = witness_;
        return rep;
    }
    if (st == VarState::queued_pos) queue_remove(pos_queue_, v);
    if (st == VarState::queued_neg) queue_remove(neg_queue_, v);
    var_state_[static_cast<std::size_t>(v)] = VarState::assigned;
    var_value_[static_cast<std::size_t>(v)] = value ? 1 : 0;
    remove_free(v);

    for (std::int32_t cid : occurrence_[static_cast<std::size_t>(v)]) {
        ClauseState& cl = clauses_[static_cast<std::size_t>(cid)];
        if (!cl.active) continue;
        auto len = static_cast<std::int32_t>(cl.members.size());
        if (value) {
            // satisfied by v; every other member is forced FALSE
            bucket_remove(len, cid);
            cl.active = false;
            ++rep.clauses_satisfied;
            for (std::int32_t u : cl.members) {
                if (u == v) continue;
                bool was_pos = queued_pos(u);
                push_neg(u);
                if (contradiction_) {
                    if (was_pos) witness_ = cl.members;
                    rep.contradiction = true;
                    rep.witness = witness_;
                    return rep;
                }
                ++rep.neg_pushes;
            }
        } else {
            cl.members.erase(std::find(cl.members.begin(), cl.members.end(), v));
            bucket_remove(len, cid);
            if (cl.members.size() == 1) {
                cl.active = false;
                std::int32_t u = cl.members[0];
                bool was_neg = queued_neg(u);
                push_pos(u);
                if (contradiction_) {
                    if (was_neg) witness_ = {u, v};
                    rep.contradiction = true;
                    rep.witness = witness_;
                    return rep;
                }
                ++rep.pos_pushes;
            } else {
                bucket_add(len - 1, cid);
                ++rep.clauses_shrunk;
            }
        }
    }
    return rep;
}

std::int32_t WorkingFormula::pop_pos_front() {
    std::int32_t v = pos_queue_.front();
    queue_remove(pos_queue_, v);
    var_state_[static_cast<std::size_t>(v)] = VarState::free_var;
    return v;
}

std::int32_t WorkingFormula::pop_neg_front() {
    std::int32_t v = neg_queue_.front();
    queue_remove(neg_queue_, v);
    var_state_[static_cast<std::size_t>(v)] = VarState::free_var;
    return v;
}

std::int32_t WorkingFormula::pop_pos_random(Rng& rng) {
    std::int32_t v = pos_queue_[rng.below(pos_queue_.size())];
    queue_remove(pos_queue_, v);
    var_state_[static_cast<std::size_t>(v)] = VarState::free_var;
    return v;
}

std::int32_t WorkingFormula::pop_neg_random(Rng& rng) {
    std::int32_t v = neg_queue_[rng.below(neg_queue_.size())];
    queue_remove(neg_queue_, v);
    var_state_[static_cast<std::size_t>(v)] = VarState::free_var;
    return v;
}

std::int32_t WorkingFormula::random_free_variable(Rng& rng) const {
    if (free_vars_.empty()) throw invalid_parameters("random_free_variable: none left");
    return free_vars_[rng.below(free_vars_.size())];
}

std::int32_t WorkingFormula::random_member_of_random_clause(std::int32_t length, Rng& rng) {
    const auto& b = buckets_[static_cast<std::size_t>(length)];
    if (b.empty()) throw invalid_parameters("random_member_of_random_clause: empty bucket");
    std::int32_t cid = b[rng.below(b.size())];
    const auto& members = clauses_[static_cast<std::size_t>(cid)].members;
    return members[rng.below(members.size())];
}

std::vector<Clause> WorkingFormula::active_clauses(std::int32_t length) const {
    std::vector<Clause> out;
    for (std::int32_t cid : buckets_[static_cast<std::size_t>(length)]) {
        Clause c = clauses_[static_cast<std::size_t>(cid)].members;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
    }
    return out;
}

// --- endgame -------------------------------------------------------------------

EndgameOutcome endgame_2xor(const WorkingFormula& wf,
                            const std::function<double(std::int64_t)>& f_n) {
    if (wf.max_long_length() != 0 || wf.pos_count() + wf.neg_count() > 0) {
        throw invalid_parameters("endgame_2xor: formula still has long clauses or queued units");
    }
    auto fn = f_n ? f_n : default_f_n;
    double cap = fn(wf.n());

    EndgameOutcome out;
    out.stats.reached = true;
    out.stats.graph_vertices = wf.free_count();
    out.stats.graph_edges = wf.count_of_length(2);

    std::vector<Clause> edges = wf.active_clauses(2);
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(wf.n()) + 1);
    for (const Clause& e : edges) {
        adj[static_cast<std::size_t>(e[0])].push_back(e[1]);
        adj[static_cast<std::size_t>(e[1])].push_back(e[0]);
    }

    out.a_partial = Assignment(wf.n());
    out.b_partial = Assignment(wf.n());
    std::vector<std::int8_t> color(static_cast<std::size_t>(wf.n()) + 1, -1);

    std::vector<std::int32_t> vertices = wf.free_variables();
    std::sort(vertices.begin(), vertices.end());

    std::vector<std::int32_t> queue;
    for (std::int32_t seed : vertices) {
        if (color[static_cast<std::size_t>(seed)] != -1) continue;
        // seed is the component representative: TRUE in A, FALSE in B
        std::vector<std::int32_t> comp;
        color[static_cast<std::size_t>(seed)] = 1;
        queue.assign(1, seed);
        bool bipartite = true;
        while (!queue.empty()) {
            std::int32_t x = queue.back();
            queue.pop_back();
            comp.push_back(x);
            std::int8_t cx = color[static_cast<std::size_t>(x)];
            for (std::int32_t y : adj[static_cast<std::size_t>(x)]) {
                std::int8_t& cy = color[static_cast<std::size_t>(y)];
                if (cy == -1) {
                    cy = static_cast<std::int8_t>(1 - cx);
                    queue.push_back(y);
                } else if (cy == cx) {
                    bipartite = false;
                }
            }
            if (!bipartite) break;
        }
        if (!bipartite) {
            out.ok = false;
            out.fail_reason = FailReason::non_bipartite;
            out.stats.bipartite = false;
            return out;
        }
        auto size = static_cast<std::int64_t>(comp.size());
        out.stats.max_component = std::max(out.stats.max_component, size);
        if (static_cast<double>(size) >= cap) {
            out.ok = false;
            out.fail_reason = FailReason::oversized_component;
            out.stats.bipartite = true;
            return out;
        }
        std::sort(comp.begin(), comp.end());
        for (std::int32_t x : comp) {
            bool a_val = color[static_cast<std::size_t>(x)] == 1;
            out.a_partial.set(x, a_val);
            out.b_partial.set(x, !a_val);
        }
        out.components.push_back(std::move(comp));
    }
    out.ok = true;
    out.stats.bipartite = true;
    return out;
}

// --- algorithm runs ---------------------------------------------------------------

namespace {

struct RunDriver {
    const EcInstance& inst;
    const RunOptions& options;
    Rng rng;
    WorkingFormula wf;
    RunResult res;
    std::int64_t steps = 0;
    std::int64_t sample_every = 1;
    bool t2_seen = false;
    std::function<double(std::int64_t)> f_n;

    RunDriver(const EcInstance& instance, RngSpec spec, const RunOptions& opts,
              const std::string& schedule_id)
        : inst(instance), options(opts), rng(spec), wf(instance) {
        inst.validate();
        res.trajectory.mode = "empirical";
        res.trajectory.r = static_cast<double>(inst.m()) / inst.n;
        res.trajectory.schedule_id = schedule_id;
        sample_every = std::max<std::int64_t>(1, (inst.n + 999) / 1000);
        f_n = options.f_n ? options.f_n : default_f_n;
        record_sample();
        check_t2();
    }

    double scaled_time() const { return static_cast<double>(steps) / inst.n; }

    void record_sample() {
        if (!options.record) return;
        double n = inst.n;
        res.trajectory.samples.push_back({scaled_time(), wf.count_of_length(3) / n,
                                          wf.count_of_length(2) / n, wf.pos_count() / n,
                                          wf.neg_count() / n});
    }

    void check_t2() {
        if (!t2_seen && wf.max_long_length() == 0) {
            res.t2_emp = scaled_time();
            t2_seen = true;
        }
    }

    // Applies one assignment; returns false on contradiction.
    bool apply(std::int32_t branch, std::int32_t v, bool value) {
        wf.set_variable(v, value);
        ++steps;
        if (wf.in_contradiction()) {
            res.outcome = RunFailure{FailReason::contradiction, steps};
            return false;
        }
        if (options.step_log) {
            options.step_log({steps, branch, v, value, wf.count_of_length(3),
                              wf.count_of_length(2), wf.pos_count(), wf.neg_count()});
        }
        check_t2();
        if (steps % sample_every == 0) record_sample();
        return true;
    }

    bool serve_pos_or_random() {
        std::int32_t v =
            wf.pos_count() > 0 ? wf.pop_pos_random(rng) : wf.random_free_variable(rng);
        return apply(1, v, true);
    }

    bool serve_neg_or_random() {
        std::int32_t v =
            wf.neg_count() > 0 ? wf.pop_neg_random(rng) : wf.random_free_variable(rng);
        return apply(2, v, false);
    }

    bool shorten_maximal_clause() {
        std::int32_t v = wf.random_member_of_random_clause(wf.max_long_length(), rng);
        return apply(3, v, false);
    }

    bool drain_queues(const Schedule* lazy_schedule) {
        if (options.keep_lazy_drain && lazy_schedule != nullptr) {
            // keep drawing lazy branches; branch 3 no longer applies, so the
            // draw is renormalized over the unit branches
            while (wf.pos_count() + wf.neg_count() > 0) {
                double t = scaled_time();
                double l1 = lazy_schedule->lambda1(t);
                double l2 = lazy_schedule->lambda2(t);
                double s = l1 + l2;
                bool first = s > 0.0 ? rng.uniform01() * s < l1 : rng.uniform01() < 0.5;
                if (first ? !serve_pos_or_random() : !serve_neg_or_random()) return false;
            }
            return true;
        }
        while (wf.pos_count() + wf.neg_count() > 0) {
            if (wf.pos_count() > 0) {
                if (!apply(0, wf.pop_pos_front(), true)) return false;
            } else {
                if (!apply(0, wf.pop_neg_front(), false)) return false;
            }
        }
        return true;
    }

    void finish_with_endgame() {
        record_sample();
        EndgameOutcome eo = endgame_2xor(wf, f_n);
        res.stats = eo.stats;
        if (!eo.ok) {
            res.outcome = RunFailure{eo.fail_reason, steps};
            return;
        }
        Assignment a(inst.n), b(inst.n);
        for (std::int32_t v = 1; v <= inst.n; ++v) {
            if (wf.assigned(v)) {
                bool val = wf.value_of(v);
                a.set(v, val);
                b.set(v, val);
            } else {
                a.set(v, eo.a_partial.get(v));
                b.set(v, eo.b_partial.get(v));
            }
        }
        res.raw_overlap = overlap_and_distance(a, b).overlap;
        res.outcome = RunPair{std::move(a), std::move(b), std::move(eo.components)};
    }
};

} // namespace

RunResult run_lazy(const EcInstance& inst, const Schedule& schedule, RngSpec rng,
                   RunOptions options) {
    RunDriver d(inst, rng, options, schedule.id);
    while (d.wf.max_long_length() != 0) {
        double t = d.scaled_time();
        double l1 = schedule.lambda1(t);
        double l2 = schedule.lambda2(t);
        double l3 = schedule.lambda3(t);
        double s = l1 + l2 + l3;
        if (!(s > 0.0)) throw numerical_error("run_lazy: schedule sums to zero");
        double u = d.rng.uniform01() * s;
        bool ok;
        if (u < l1) {
            ok = d.serve_pos_or_random();
        } else if (u < l1 + l2) {
            ok = d.serve_neg_or_random();
        } else {
            ok = d.shorten_maximal_clause();
        }
        if (!ok) return std::move(d.res);
    }
    if (!d.drain_queues(&schedule)) return std::move(d.res);
    d.finish_with_endgame();
    return std::move(d.res);
}

RunResult run_largest_clause(const EcInstance& inst, RngSpec rng, RunOptions options) {
    RunDriver d(inst, rng, options, "largest-clause");
    while (true) {
        std::int64_t units = d.wf.pos_count() + d.wf.neg_count();
        if (units > 0) {
            // uniform over all unit clauses, positive and negative pooled
            bool pos = static_cast<std::int64_t>(
                           d.rng.below(static_cast<std::uint64_t>(units))) < d.wf.pos_count();
            bool ok = pos ? d.apply(1, d.wf.pop_pos_random(d.rng), true)
                          : d.apply(2, d.wf.pop_neg_random(d.rng), false);
            if (!ok) return std::move(d.res);
        } else if (d.wf.max_long_length() != 0) {
            if (!d.shorten_maximal_clause()) return std::move(d.res);
        } else {
            break;
        }
    }
    d.finish_with_endgame();
    return std::move(d.res);
}

// --- overlap tuning ----------------------------------------------------------------

TuneResult tune_overlap(const RunResult& result, const OverlapWindow& window) {
    const RunPair* pair = result.pair();
    if (pair == nullptr) throw invalid_parameters("tune_overlap: result carries no pair");
    const std::int64_t n = pair->a.size();

    TuneResult out;
    out.a = pair->a;
    out.b = pair->b;

    std::int64_t diff = 0;
    for (const auto& comp : pair->components) diff += static_cast<std::int64_t>(comp.size());
    std::int64_t agreements = n - diff;

    double lo_cnt = window.lo(n) * static_cast<double>(n);
    double hi_cnt = window.hi(n) * static_cast<double>(n);
    if (static_cast<double>(agreements) > hi_cnt + 1e-9) {
        out.ok = false;
        out.error = "window-unreachable: target overlap below the raw overlap";
        return out;
    }

    std::vector<std::size_t> order(pair->components.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return pair->components[x].size() > pair->components[y].size();
    });

    for (std::size_t ci : order) {
        if (static_cast<double>(agreements) >= lo_cnt - 1e-9) break;
        auto size = static_cast<std::int64_t>(pair->components[ci].size());
        if (static_cast<double>(agreements + size) <= hi_cnt + 1e-9) {
            for (std::int32_t v : pair->components[ci]) out.b.set(v, out.a.get(v));
            agreements += size;
            ++out.flipped_components;
        }
    }

    out.ok = window.contains_agreements(agreements, n);
    if (!out.ok) {
        out.error = "window-unreachable: component granularity too coarse for the window";
    }
    return out;
}

} // namespace ec
