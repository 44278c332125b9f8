#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ec {

// Branch probabilities of the lazy loop as functions of scaled time t in [0,1).
// Values are expected to be nonnegative and sum to at most 1 at every t; the
// adaptive sketch clamps out-of-range values and raises clamp_flag.
struct Schedule {
    std::string id = "default";
    std::function<double(double)> lambda1;
    std::function<double(double)> lambda2;
    std::function<double(double)> lambda3;
    std::shared_ptr<std::atomic<bool>> clamp_flag = std::make_shared<std::atomic<bool>>(false);

    bool clamp_occurred() const { return clamp_flag && clamp_flag->load(); }
};

Schedule make_schedule_default(); // constants 1/3
// The sketched adaptive choice, with lambda3 taken as the complement and all
// three values clamped to [0,1]. c2, c3 are evaluated on the default-schedule
// closed forms for the given r. Exposed for experimentation only.
Schedule make_schedule_adaptive_sketch(double r, double epsilon = 0.01);

// First-stage closed forms under the default schedule:
// c3 = (r + 1/6)(1-t)^3 - (1-t)/6, c2 = (1-t)^2/3 - (1-t)/3 + 2(r+1/6) t (1-t)^2.
struct ClosedForms {
    double c3 = 0.0;
    double c2 = 0.0;
};
ClosedForms closed_forms(double t, double r);

// First zero of c3: t2 = 1 - 1/sqrt(6r+1).
double stopping_time_t2(double r);

// Average flows into the unit queues under the default schedule,
// fp = (2/3) 2c2/(1-t) + (1/3) 6c3/(1-t), fn = (1/3) 2c2/(1-t).
struct Flows {
    double fp = 0.0;
    double fn = 0.0;
};
Flows flows(double t, double r);

// Edge density of the endgame graph, mu = 2 c2(t2)/(1 - t2). The flag warns
// when r >= 1/6 (the lazy server can no longer keep the queues subcritical).
struct EndgameDensity {
    double mu = 0.0;
    bool supercritical = false;
};
EndgameDensity endgame_density_mu(double r);

// Lower-bound curve: (1/6)[1/(1-q)^2 - 1] for q < 1 - 1/sqrt(2), else 1/6.
double r_lb_eval(double q);

// --- trajectory curves -------------------------------------------------------

struct TrajectorySample {
    double t = 0.0;
    double c3 = 0.0;
    double c2 = 0.0;
    double p = 0.0; // scaled positive unit queue
    double n = 0.0; // scaled negative unit queue
};

struct TrajectoryCurve {
    std::vector<TrajectorySample> samples; // t strictly increasing
    std::string mode;                      // closed-form | paper-ode | recurrence-ode | empirical
    double r = 0.0;
    std::string schedule_id;

    // Linear interpolation of one field at time t (clamped to the sampled range).
    double at(double t, double TrajectorySample::*field) const;
    double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
};

enum class OdeMode {
    paper,      // exactly the averaged system from the trajectory analysis
    recurrence, // adds the +lambda3 clause-conversion inflow to c2' and the
                // unit-queue drift equations
};

// Classical fourth-order fixed-step integration from (c3,c2,p,n) = (r,0,0,0).
// Halts at the first t with c3 <= 0 (crossing located by linear interpolation)
// or at t = 1 - 1e-3 if c3 never vanishes.
TrajectoryCurve ode_integrate(double r, const Schedule& schedule, OdeMode mode,
                              double step = 1e-4);

// Curve sampled straight from the closed forms on [0, t2].
TrajectoryCurve closed_form_curve(double r, double step = 1e-4);

// CSV with columns t,c3,c2,p,n,mode,r,schedule-id.
void write_trajectory_csv(std::ostream& out, const TrajectoryCurve& curve, bool header = true);

} // namespace ec
