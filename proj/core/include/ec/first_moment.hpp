#pragma once

#include <cstdint>
#include <vector>

namespace ec {

// --- log-space combinatorics -----------------------------------------------

// ln C(n, k); -inf when k < 0 or k > n.
double log_binomial(std::int64_t n, std::int64_t k);

// Exact C(n, k) in 64 bits. Returns false on overflow (value left untouched).
bool exact_binomial(std::int64_t n, std::int64_t k, std::uint64_t& out);

// ln n!/(a! b! c! d!).
double log_multinomial4(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t d);

// --- stationary point of the first-moment exponent --------------------------

// q_k, the overlap at which the stationary root formula crosses q.
double critical_overlap(int k);

struct StationaryDomain {
    int k = 3;
    double q = 0.0;
    double q_k = 0.0;   // critical overlap for this k
    double root = 0.0;  // positive root of the stationarity equation
    double x_max = 0.0; // min(q, root): right endpoint of F's usable domain
};

// Closed-form positive root of k x^2 - (k-1) q x - (k-2)(k-1)(1-q)^2/4 = 0,
// verified against the stationarity equation to 1e-10. The root exceeds q
// when q < q_k, where ln(x/(q-x)) is undefined, hence the cap x_max.
StationaryDomain stationary_domain(int k, double q);

// LHS of the stationarity equation:
// (k-2)/x + (q-2x) / ((k-1)((1-q)/2)^2 + x(q-x)).
double stationarity_residual(int k, double q, double x);

// F_{k,q}(x) = ln(x/(q-x)) / stationarity_residual(k,q,x).
// Strictly increasing bijection (q/2, x_max) -> (0, inf).
// Throws std::domain_error for x outside the open domain.
double F_eval(int k, double q, double x);

// Inverse of F by bisection: the x with |F(x) - r| <= tol.
double G_inverse(int k, double q, double r, double tol = 1e-12, int max_iterations = 200);

// Scaled pair-satisfaction probability P_k(alpha,beta,gamma,delta)
// = k(k-1) alpha^{k-2} (beta*gamma + alpha*delta/(k-1)).
double pair_probability_scaled(int k, double alpha, double beta, double gamma, double delta);

// First-moment exponent
// t(alpha) = r ln P_k(alpha,(1-q)/2,(1-q)/2,q-alpha)
//            - alpha ln alpha - (q-alpha) ln(q-alpha) - (1-q) ln((1-q)/2),
// with the x ln x -> 0 convention at the endpoints.
double exponent_t(int k, double q, double r, double alpha);

// --- exact pair-satisfaction probability ------------------------------------

// P*(a,b,c,d) = [C(a,k-2) b c + C(a,k-1) d] / C(n,k): the fraction of k-subsets
// forming a clause satisfied by both assignments of the given global profile.
struct PStar {
    bool exact = true;       // num/den valid (no 64-bit overflow)
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double log_value = 0.0;  // -inf when the numerator vanishes
    double value = 0.0;
};

PStar pstar_exact(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                  std::int64_t n, int k);

// --- the threshold upper bound ----------------------------------------------

struct BoundResult {
    double r_value = 0.0;
    double residual = 0.0; // exponent_t(k,q,r_value,G(r_value))
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
};

struct RUpOptions {
    double r_max = 20.0;     // scan range (0, r_max]
    int grid_points = 2000;
    double tol = 1e-8;       // target |exponent| at the returned r
    double domain_tol = 1e-12;
    int max_iterations = 200;
};

// Locates the last sign change of h(r) = t(G(r)) on the scanned range and
// bisects it down to |h| <= tol. Throws numerical_error when no sign change
// is found (the scan trace goes into the message).
BoundResult r_up_solve(int k, double q, RUpOptions opts = {});

} // namespace ec
