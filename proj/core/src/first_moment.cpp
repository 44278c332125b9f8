#include "ec/first_moment.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ec/errors.hpp"

namespace ec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

void check_kq(int k, double q) {
    if (k < 3) throw invalid_parameters("k must be >= 3");
    if (!(q > 0.0 && q < 1.0)) throw invalid_parameters("q must lie in (0,1)");
}

} // namespace

double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -kInf;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

bool exact_binomial(std::int64_t n, std::int64_t k, std::uint64_t& out) {
    if (k < 0 || k > n) {
        out = 0;
        return true;
    }
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // r * (n-k+i) / i is integral at every step
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        std::uint64_t g = std::gcd(num, static_cast<std::uint64_t>(i));
        std::uint64_t den = static_cast<std::uint64_t>(i) / g;
        num /= g;
        if (r % den != 0) {
            std::uint64_t g2 = std::gcd(r, den);
            r /= g2;
            den /= g2;
            if (den != 1) return false; // should not happen; be safe
        } else {
            r /= den;
        }
        if (__builtin_mul_overflow(r, num, &r)) return false;
    }
    out = r;
    return true;
}

double log_multinomial4(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t d) {
    auto lf = [](std::int64_t x) { return std::lgamma(static_cast<double>(x) + 1.0); };
    return lf(n) - lf(a) - lf(b) - lf(c) - lf(d);
}

double critical_overlap(int k) {
    if (k < 3) throw invalid_parameters("critical_overlap: k must be >= 3");
    double s = std::sqrt(static_cast<double>(k - 1) * static_cast<double>(k - 2));
    return s / (2.0 + s);
}

double stationarity_residual(int k, double q, double x) {
    double half = (1.0 - q) / 2.0;
    return static_cast<double>(k - 2) / x +
           (q - 2.0 * x) / (static_cast<double>(k - 1) * half * half + x * (q - x));
}

StationaryDomain stationary_domain(int k, double q) {
    check_kq(k, q);
    StationaryDomain d;
    d.k = k;
    d.q = q;
    d.q_k = critical_overlap(k);
    double km1 = static_cast<double>(k - 1);
    double disc = km1 * km1 * q * q +
                  static_cast<double>(k) * static_cast<double>(k - 2) * km1 * (1.0 - q) * (1.0 - q);
    d.root = (km1 * q + std::sqrt(disc)) / (2.0 * k);
    d.x_max = std::min(q, d.root);
    double res = stationarity_residual(k, q, d.root);
    if (std::abs(res) > 1e-10) {
        std::ostringstream oss;
        oss << "stationary_domain: root residual " << res << " exceeds 1e-10 (k=" << k
            << ", q=" << q << ")";
        throw numerical_error(oss.str());
    }
    return d;
}

double F_eval(int k, double q, double x) {
    check_kq(k, q);
    StationaryDomain d = stationary_domain(k, q);
    if (!(x > q / 2.0 && x < d.x_max)) {
        std::ostringstream oss;
        oss << "F_eval: x=" << x << " outside (" << q / 2.0 << ", " << d.x_max << ")";
        throw std::domain_error(oss.str());
    }
    return std::log(x / (q - x)) / stationarity_residual(k, q, x);
}

double G_inverse(int k, double q, double r, double tol, int max_iterations) {
    check_kq(k, q);
    if (!(r > 0.0)) throw invalid_parameters("G_inverse: r must be positive");
    if (!(tol > 0.0)) throw invalid_parameters("G_inverse: tol must be positive");
    StationaryDomain d = stationary_domain(k, q);
    double lo = q / 2.0;
    double hi = d.x_max;
    double mid = 0.5 * (lo + hi);
    double err = kInf;
    for (int it = 0; it < max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        double f = F_eval(k, q, mid);
        err = f - r;
        if (std::abs(err) <= tol) return mid;
        if (f < r) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-17 * std::max(1.0, std::abs(hi))) break;
    }
    if (std::abs(err) > std::max(tol, 1e-9)) {
        std::ostringstream oss;
        oss << "G_inverse: no convergence (k=" << k << ", q=" << q << ", r=" << r
            << ", last x=" << mid << ", |F(x)-r|=" << std::abs(err) << ")";
        throw numerical_error(oss.str());
    }
    return mid;
}

double pair_probability_scaled(int k, double alpha, double beta, double gamma, double delta) {
    double p = static_cast<double>(k) * static_cast<double>(k - 1);
    for (int i = 0; i < k - 2; ++i) p *= alpha;
    return p * (beta * gamma + alpha * delta / static_cast<double>(k - 1));
}

double exponent_t(int k, double q, double r, double alpha) {
    check_kq(k, q);
    if (!(alpha >= 0.0 && alpha <= q)) {
        throw invalid_parameters("exponent_t: alpha must lie in [0, q]");
    }
    double half = (1.0 - q) / 2.0;
    double pk = pair_probability_scaled(k, alpha, half, half, q - alpha);
    double lead = pk > 0.0 ? r * std::log(pk) : -kInf;
    return lead - xlogx(alpha) - xlogx(q - alpha) - (1.0 - q) * std::log(half);
}

PStar pstar_exact(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t n,
                  int k) {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw invalid_parameters("pstar: negative class size");
    if (a + b + c + d != n) throw invalid_parameters("pstar: profile does not sum to n");
    if (k < 3) throw invalid_parameters("pstar: k must be >= 3");
    if (n < k) throw invalid_parameters("pstar: need n >= k");

    PStar p;
    std::uint64_t bin_a_km2 = 0, bin_a_km1 = 0, den = 0;
    bool ok = exact_binomial(a, k - 2, bin_a_km2) && exact_binomial(a, k - 1, bin_a_km1) &&
              exact_binomial(n, k, den);
    if (ok) {
        std::uint64_t t1 = 0, t2 = 0, num = 0;
        ok = !__builtin_mul_overflow(bin_a_km2, static_cast<std::uint64_t>(b), &t1) &&
             !__builtin_mul_overflow(t1, static_cast<std::uint64_t>(c), &t1) &&
             !__builtin_mul_overflow(bin_a_km1, static_cast<std::uint64_t>(d), &t2) &&
             !__builtin_add_overflow(t1, t2, &num);
        if (ok) {
            p.exact = true;
            p.num = num;
            p.den = den;
            p.log_value = num > 0 ? std::log(static_cast<double>(num)) -
                                        std::log(static_cast<double>(den))
                                  : -kInf;
            p.value = static_cast<double>(num) / static_cast<double>(den);
            return p;
        }
    }

    // 64-bit overflow: fall back to log-space.
    p.exact = false;
    double lt1 = (b > 0 && c > 0) ? log_binomial(a, k - 2) + std::log(static_cast<double>(b)) +
                                        std::log(static_cast<double>(c))
                                  : -kInf;
    double lt2 = d > 0 ? log_binomial(a, k - 1) + std::log(static_cast<double>(d)) : -kInf;
    double lnum;
    if (lt1 == -kInf && lt2 == -kInf) {
        lnum = -kInf;
    } else {
        double hi = std::max(lt1, lt2);
        lnum = hi + std::log(std::exp(lt1 - hi) + std::exp(lt2 - hi));
    }
    p.log_value = lnum - log_binomial(n, k);
    p.value = std::exp(p.log_value);
    return p;
}

BoundResult r_up_solve(int k, double q, RUpOptions opts) {
    check_kq(k, q);
    if (!(opts.tol > 0.0)) throw invalid_parameters("r_up_solve: tol must be positive");

    auto h = [&](double r) { return exponent_t(k, q, r, G_inverse(k, q, r, opts.domain_tol)); };

    // Coarse scan for the last + -> <=0 crossing.
    double step = opts.r_max / opts.grid_points;
    double lo = 0.0, hi = 0.0;
    double prev_r = step;
    double prev_h = h(prev_r);
    bool found = false;
    for (int i = 2; i <= opts.grid_points; ++i) {
        double r = step * i;
        double hr = h(r);
        if (prev_h > 0.0 && hr <= 0.0) {
            lo = prev_r;
            hi = r;
            found = true;
        }
        prev_r = r;
        prev_h = hr;
    }
    if (!found) {
        std::ostringstream oss;
        oss << "r_up_solve: no sign change of t(G(r)) on (0, " << opts.r_max << "] with "
            << opts.grid_points << " grid points (k=" << k << ", q=" << q
            << "); h(" << step << ")=" << h(step) << ", h(" << opts.r_max << ")=" << prev_h;
        throw numerical_error(oss.str());
    }

    BoundResult res;
    double mid = 0.5 * (lo + hi);
    double hm = h(mid);
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        hm = h(mid);
        if (std::abs(hm) <= opts.tol) break;
        if (hm > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    res.r_value = mid;
    res.residual = hm;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.iterations = it;
    if (std::abs(hm) > opts.tol) {
        std::ostringstream oss;
        oss << "r_up_solve: bisection stalled at residual " << hm << " (k=" << k << ", q=" << q
            << ")";
        throw numerical_error(oss.str());
    }
    return res;
}

} // namespace ec
