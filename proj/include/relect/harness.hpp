#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relect/analysis.hpp"
#include "relect/protocol.hpp"

namespace relect {

struct TrialConfig {
    ProtocolParams params;
    int n = 2;
    int trials = 1000;
    std::uint64_t master_seed = 0;
    int workers = 0;  // parallelism hint; 0 = hardware concurrency
};

struct StatSummary {
    double mean = 0;
    double stddev = 0;   // sample standard deviation
    double ci95 = 0;     // 1.96 * stddev / sqrt(trials)
};

struct TrialStats {
    int trials = 0;
    StatSummary rounds;
    StatSummary probabilistic_slots;
    StatSummary total_slots;
    StatSummary awake_mean;  // per-trial mean over stations
    StatSummary awake_max;   // per-trial max over stations
    double round1_success_freq = 0;
    // per_round_success_freq[j-1]: elections in round j / trials reaching round j.
    std::vector<double> per_round_success_freq;
    std::vector<std::int64_t> reached_round;
    double termination_rate = 0;
};

// Runs `trials` independent elections with per-trial seeds derived from the
// master seed; the result is a pure function of (params, n, trials,
// master_seed) regardless of the worker count.
TrialStats run_trials(const TrialConfig& config);

struct DominanceReport {
    std::uint64_t samples = 0;
    std::uint64_t coupling_violations = 0;  // draws where K > H; zero by construction
    std::vector<double> cdf_first_low;      // empirical P(H <= k), H from p_seq
    std::vector<double> cdf_first_high;     // empirical P(K <= k), K from q_seq
};

// Couples two Bernoulli sequences through one uniform per index (X_j = 1 iff
// U_j < p_j, Y_j likewise from q_j >= p_j) and samples the first-success
// indices H and K. Under the coupling K <= H holds surely, so the empirical
// CDFs are ordered at every index. A final element 1.0 is appended
// internally so both indices are finite.
// PreconditionError if the sequences differ in length or p_i > q_i anywhere.
DominanceReport dominance_check(std::span<const double> p_seq, std::span<const double> q_seq,
                                std::uint64_t samples, std::uint64_t seed);

struct SweepRow {
    int n = 0;
    double alpha = 0;
    double q_reference = 0;
    int critical_round = 0;
    double c_reference = 0;            // c_q(alpha) with the protocol's reference q
    double predicted_slot_bound = 0;   // c_q(alpha) * log2 n
    double predicted_awake_scale = 0;  // (2 or 2.5) * log_alpha log2 n
    TrialStats stats;
};

// Cross product of n and alpha values; each row pairs measured statistics
// with the closed-form references. DomainError propagates when an alpha is
// outside the valid range for the protocol's reference q.
std::vector<SweepRow> sweep(std::span<const int> n_values, std::span<const double> alpha_values,
                            Protocol protocol, int trials, std::uint64_t seed, int workers = 0);

}  // namespace relect
