#include "ec/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "ec/errors.hpp"

namespace ec {

namespace {

double clamp01(double x, const std::shared_ptr<std::atomic<bool>>& flag) {
    if (x < 0.0 || x > 1.0) {
        if (flag) flag->store(true);
        return std::clamp(x, 0.0, 1.0);
    }
    return x;
}

} // namespace

Schedule make_schedule_default() {
    Schedule s;
    s.id = "default";
    auto third = [](double) { return 1.0 / 3.0; };
    s.lambda1 = third;
    s.lambda2 = third;
    s.lambda3 = third;
    return s;
}

Schedule make_schedule_adaptive_sketch(double r, double epsilon) {
    if (!(epsilon > 0.0)) throw invalid_parameters("adaptive sketch: epsilon must be positive");
    if (!(r > 0.0)) throw invalid_parameters("adaptive sketch: r must be positive");
    Schedule s;
    s.id = "adaptive-sketch(eps=" + std::to_string(epsilon) + ")";
    auto flag = s.clamp_flag;
    auto cf = [r](double t) {
        ClosedForms c = closed_forms(std::min(t, 1.0 - 1e-9), r);
        c.c3 = std::max(c.c3, 0.0);
        c.c2 = std::max(c.c2, 0.0);
        return c;
    };
    auto l1 = [cf, epsilon, flag](double t) {
        ClosedForms c = cf(t);
        return clamp01((2.0 * c.c2 + epsilon) / (1.0 - t + 2.0 * c.c2), flag);
    };
    auto l2 = [cf, epsilon, flag](double t) {
        ClosedForms c = cf(t);
        return clamp01((2.0 * c.c2 + epsilon) * (6.0 * c.c3 + 2.0 * c.c2 + epsilon) /
                           ((1.0 - t) * (1.0 - t + 2.0 * c.c2)),
                       flag);
    };
    s.lambda1 = l1;
    s.lambda2 = l2;
    s.lambda3 = [l1, l2, flag](double t) { return clamp01(1.0 - l1(t) - l2(t), flag); };
    return s;
}

ClosedForms closed_forms(double t, double r) {
    if (!(r > 0.0)) throw invalid_parameters("closed_forms: r must be positive");
    if (!(t >= 0.0 && t < 1.0)) throw invalid_parameters("closed_forms: t must lie in [0,1)");
    double u = 1.0 - t;
    ClosedForms c;
    c.c3 = (r + 1.0 / 6.0) * u * u * u - u / 6.0;
    c.c2 = u * u / 3.0 - u / 3.0 + 2.0 * (r + 1.0 / 6.0) * t * u * u;
    return c;
}

double stopping_time_t2(double r) {
    if (!(r > 0.0)) throw invalid_parameters("stopping_time_t2: r must be positive");
    return 1.0 - 1.0 / std::sqrt(6.0 * r + 1.0);
}

Flows flows(double t, double r) {
    ClosedForms c = closed_forms(t, r);
    double u = 1.0 - t;
    Flows f;
    f.fp = (2.0 / 3.0) * 2.0 * c.c2 / u + (1.0 / 3.0) * 6.0 * c.c3 / u;
    f.fn = (1.0 / 3.0) * 2.0 * c.c2 / u;
    return f;
}

EndgameDensity endgame_density_mu(double r) {
    if (!(r > 0.0)) throw invalid_parameters("endgame_density_mu: r must be positive");
    double t2 = stopping_time_t2(r);
    EndgameDensity d;
    d.mu = 2.0 * closed_forms(t2, r).c2 / (1.0 - t2);
    d.supercritical = r >= 1.0 / 6.0;
    return d;
}

double r_lb_eval(double q) {
    if (!(q > 0.0 && q < 1.0)) throw invalid_parameters("r_lb_eval: q must lie in (0,1)");
    if (q < 1.0 - 1.0 / std::sqrt(2.0)) {
        double u = 1.0 - q;
        return (1.0 / (u * u) - 1.0) / 6.0;
    }
    return 1.0 / 6.0;
}

double TrajectoryCurve::at(double t, double TrajectorySample::*field) const {
    if (samples.empty()) return 0.0;
    if (t <= samples.front().t) return samples.front().*field;
    if (t >= samples.back().t) return samples.back().*field;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double v) { return s.t < v; });
    const TrajectorySample& hi = *it;
    const TrajectorySample& lo = *(it - 1);
    double w = (t - lo.t) / (hi.t - lo.t);
    return lo.*field + w * (hi.*field - lo.*field);
}

TrajectoryCurve ode_integrate(double r, const Schedule& schedule, OdeMode mode, double step) {
    if (!(r > 0.0)) throw invalid_parameters("ode_integrate: r must be positive");
    if (!(step > 0.0)) throw invalid_parameters("ode_integrate: step must be positive");
    if (step > 1e-3) throw invalid_parameters("ode_integrate: step must be <= 1e-3");

    using State = std::array<double, 4>; // c3, c2, p, n
    auto deriv = [&](double t, const State& s) -> State {
        double u = 1.0 - t;
        double l1 = schedule.lambda1(t);
        double l2 = schedule.lambda2(t);
        double l3 = schedule.lambda3(t);
        State d{};
        d[0] = -l3 - 3.0 * s[0] / u;
        d[1] = -2.0 * s[1] / u + (l2 + l3) * 3.0 * s[0] / u;
        if (mode == OdeMode::recurrence) {
            d[1] += l3; // the selected maximal clause itself becomes a 2-clause
            d[2] = -(s[2] > 0.0 ? l1 : 0.0) - s[2] / u + (l2 + l3) * 2.0 * s[1] / u;
            d[3] = -(s[3] > 0.0 ? l2 : 0.0) - s[3] / u + l1 * (2.0 * s[1] + 6.0 * s[0]) / u;
        }
        return d;
    };

    TrajectoryCurve curve;
    curve.mode = mode == OdeMode::paper ? "paper-ode" : "recurrence-ode";
    curve.r = r;
    curve.schedule_id = schedule.id;

    State s{r, 0.0, 0.0, 0.0};
    double t = 0.0;
    const double t_end = 1.0 - 1e-3;
    curve.samples.push_back({t, s[0], s[1], s[2], s[3]});
    while (s[0] > 0.0 && t < t_end) {
        double h = std::min(step, t_end - t);
        auto add = [](const State& a, const State& b, double w) {
            State out;
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + w * b[i];
            return out;
        };
        State k1 = deriv(t, s);
        State k2 = deriv(t + h / 2.0, add(s, k1, h / 2.0));
        State k3 = deriv(t + h / 2.0, add(s, k2, h / 2.0));
        State k4 = deriv(t + h, add(s, k3, h));
        State next;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        next[2] = std::max(next[2], 0.0);
        next[3] = std::max(next[3], 0.0);
        double t_next = t + h;
        if (next[0] <= 0.0) {
            // locate the c3 crossing on this step
            double w = s[0] / (s[0] - next[0]);
            double t_cross = t + w * h;
            TrajectorySample fin;
            fin.t = t_cross;
            fin.c3 = 0.0;
            fin.c2 = s[1] + w * (next[1] - s[1]);
            fin.p = s[2] + w * (next[2] - s[2]);
            fin.n = s[3] + w * (next[3] - s[3]);
            curve.samples.push_back(fin);
            return curve;
        }
        s = next;
        t = t_next;
        curve.samples.push_back({t, s[0], s[1], s[2], s[3]});
    }
    return curve;
}

TrajectoryCurve closed_form_curve(double r, double step) {
    if (!(r > 0.0)) throw invalid_parameters("closed_form_curve: r must be positive");
    if (!(step > 0.0)) throw invalid_parameters("closed_form_curve: step must be positive");
    TrajectoryCurve curve;
    curve.mode = "closed-form";
    curve.r = r;
    curve.schedule_id = "default";
    double t2 = stopping_time_t2(r);
    for (double t = 0.0; t < t2; t += step) {
        ClosedForms c = closed_forms(t, r);
        curve.samples.push_back({t, c.c3, c.c2, 0.0, 0.0});
    }
    curve.samples.push_back({t2, 0.0, closed_forms(t2, r).c2, 0.0, 0.0});
    return curve;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryCurve& curve, bool header) {
    if (header) out << "t,c3,c2,p,n,mode,r,schedule-id\n";
    for (const TrajectorySample& s : curve.samples) {
        out << s.t << ',' << s.c3 << ',' << s.c2 << ',' << s.p << ',' << s.n << ','
            << curve.mode << ',' << curve.r << ',' << curve.schedule_id << '\n';
    }
}

} // namespace ec
