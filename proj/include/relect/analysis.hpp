#pragma once

#include <cstdint>

#include "relect/errors.hpp"

namespace relect {

// Closed-form and exact finite-n election probabilities, the limiting
// series constants, and the alpha cost trade-off. Everything here is pure
// and deterministic (fixed ascending summation order), and serves as the
// oracle the simulator is validated against.

// Reference per-round success constants used for the cost curves and the
// expected-time bounds; series_constants() recomputes them independently
// as a consistency check.
inline constexpr double kQ1Reference = 0.6305;
inline constexpr double kQ2Reference = 0.6176;

// Amplitude bounds of the periodic fluctuation in the dyadic sums; folded
// into test tolerances, never evaluated directly.
inline constexpr double kFluctuationBudgetLinear = 1e-6;
inline constexpr double kFluctuationBudgetPower = 1e-5;

struct AnalysisConstants {
    // sum over m >= 1 of m! / (m^(m+2) ln 2), and the m^(m+1) variant;
    // "damped" versions carry an extra 2^-m factor (the weak-model pair).
    double series_m2_undamped = 0;  // -ln of s_inf_alg1
    double series_m1_undamped = 0;
    double series_m2_damped = 0;    // -ln of s_inf_alg2
    double series_m1_damped = 0;
    double s_inf_alg1 = 0;
    double s_inf_alg2 = 0;
    double p_inf_alg1 = 0;
    double p_inf_alg2 = 0;
    double q1 = 0;  // 1 - p_inf_alg1, rounded up at 4 decimals with fluctuation margin
    double q2 = 0;
    double alpha_max_alg1 = 0;  // 1/(1-q1)
    double alpha_max_alg2 = 0;
};

// Sums each series in ascending m until a term drops below 1e-15.
AnalysisConstants series_constants();

// Round index from which the per-round election probability stays bounded
// away from zero: ceil(log_alpha(log2 n)) with the near-integer snap.
int critical_round(std::int64_t n, double alpha);

// Probability that exactly one of n stations broadcasts when each wakes
// independently with probability 2^-k. Evaluated in log space.
double unique_broadcast_prob(std::int64_t n, int k);

struct RoundProbabilities {
    double success = 0;   // exactly one slot of the round fires the election event
    double all_miss = 0;  // no slot fires it
};

// Model probabilities for round j of alg1: per-slot event = a unique
// broadcaster. `success` is a lower bound on the true election probability
// (a station that is unique in two slots still wins but is not counted).
RoundProbabilities p_round_alg1_formula(std::int64_t n, int j, double alpha, int k_start = 1);

// Alg2 counterpart with the pair event: exactly two stations awake, one
// sending and one listening, all others asleep. A modeling approximation:
// real witness creation also happens in busier slots.
RoundProbabilities p_round_alg2_formula(std::int64_t n, int j, double alpha, int k_start = 1);

// Exact per-round election probability of alg1 via a dynamic program over
// the number of distinct candidates. Slots are independent and stations
// exchangeable, so the lone broadcaster of a slot is uniform over stations.
// SizeError for n > 64.
double exact_round_success_alg1(int n, int j, double alpha, int k_start = 1);

// Exact per-round election probability of alg2 via a dynamic program over
// witness subsets (success = exactly one witness station at round end).
// SizeError for n > 8.
double exact_round_success_alg2(int n, int j, double alpha, int k_start = 1);

// Expected-time constant c_q(alpha) = q alpha^3 / ((alpha-1)(1 - alpha(1-q))).
// DomainError outside 1 < alpha < 1/(1-q).
double c_of_alpha(double q, double alpha);

struct CostProfile {
    double q = 0;
    double alpha = 0;
    double c = 0;
    double alpha_max = 0;  // 1/(1-q), infinity for q = 1
};
CostProfile cost_profile(double q, double alpha);

struct OptimalAlpha {
    double alpha_star = 0;
    double c_star = 0;
};
// Minimizes c_q over (1, 1/(1-q)): coarse grid scan for the global bracket,
// then golden-section to 1e-7 in alpha.
OptimalAlpha optimal_alpha(double q);

// Truncated dyadic harmonic sums, evaluated by direct summation.
// harmonic_exp_sum:        sum_{k=1}^{r} (n/2^k) exp(-n/2^k)
// harmonic_exp_power_sum:  sum_{k=r1}^{r2} (n/2^k)^m exp(-n m / 2^k)
double harmonic_exp_sum(std::int64_t n, int r);
double harmonic_exp_power_sum(std::int64_t n, int m, int r1, int r2);

}  // namespace relect
