#include "relect/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "relect/rng.hpp"

namespace relect {

namespace {

struct TrialRow {
    int rounds = 0;
    std::uint64_t prob_slots = 0;
    std::uint64_t total_slots = 0;
    double awake_mean = 0;
    std::uint32_t awake_max = 0;
    bool terminated = false;
};

TrialRow summarize(const RunMetrics& m, const ProtocolParams& params) {
    // Per-trial hard checks; a violation is a bug, not noise.
    if (m.terminated != (m.leader_index >= 0))
        throw std::logic_error("terminated run without leader (or leader without termination)");
    const auto overhead = static_cast<std::uint64_t>(deterministic_overhead(params.protocol));
    if (m.total_slots != m.probabilistic_slots + overhead * m.rounds_used)
        throw std::logic_error("slot accounting identity violated");

    TrialRow row;
    row.rounds = m.rounds_used;
    row.prob_slots = m.probabilistic_slots;
    row.total_slots = m.total_slots;
    double sum = 0;
    std::uint32_t mx = 0;
    for (std::uint32_t a : m.awake_per_station) {
        if (a < static_cast<std::uint32_t>(m.rounds_used))
            throw std::logic_error("station missed a mandatory deterministic slot");
        sum += a;
        mx = std::max(mx, a);
    }
    row.awake_mean = sum / static_cast<double>(m.awake_per_station.size());
    row.awake_max = mx;
    row.terminated = m.terminated;
    return row;
}

StatSummary summarize_column(const std::vector<double>& xs) {
    StatSummary s;
    const auto n = static_cast<double>(xs.size());
    if (xs.empty()) return s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    s.ci95 = 1.96 * s.stddev / std::sqrt(n);
    return s;
}

}  // namespace

TrialStats run_trials(const TrialConfig& config) {
    validate_params(config.params, config.n);
    if (config.trials < 1) throw ConfigError("trial count must be positive");

    const int trials = config.trials;
    int workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, trials);

    std::vector<TrialRow> rows(trials);
    auto body = [&](int t) {
        const RunMetrics m =
            run_election(config.params, config.n, trial_seed(config.master_seed, t));
        rows[t] = summarize(m, config.params);
    };

    if (workers <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
    } else {
        std::atomic<int> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int t = cursor.fetch_add(1); t < trials; t = cursor.fetch_add(1)) body(t);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Aggregation is sequential in trial order, so results do not depend on
    // the worker count.
    TrialStats stats;
    stats.trials = trials;
    std::vector<double> col_rounds, col_prob, col_total, col_awake_mean, col_awake_max;
    col_rounds.reserve(trials);
    col_prob.reserve(trials);
    col_total.reserve(trials);
    col_awake_mean.reserve(trials);
    col_awake_max.reserve(trials);

    const int max_rounds = config.params.max_rounds;
    std::vector<std::int64_t> reached(max_rounds + 1, 0), elected(max_rounds + 1, 0);
    int terminated = 0;
    for (const TrialRow& row : rows) {
        col_rounds.push_back(row.rounds);
        col_prob.push_back(static_cast<double>(row.prob_slots));
        col_total.push_back(static_cast<double>(row.total_slots));
        col_awake_mean.push_back(row.awake_mean);
        col_awake_max.push_back(row.awake_max);
        for (int j = 1; j <= row.rounds; ++j) ++reached[j];
        if (row.terminated) {
            ++terminated;
            ++elected[row.rounds];
        }
    }
    stats.rounds = summarize_column(col_rounds);
    stats.probabilistic_slots = summarize_column(col_prob);
    stats.total_slots = summarize_column(col_total);
    stats.awake_mean = summarize_column(col_awake_mean);
    stats.awake_max = summarize_column(col_awake_max);
    stats.termination_rate = static_cast<double>(terminated) / trials;
    stats.round1_success_freq = static_cast<double>(elected[1]) / trials;
    int last_reached = 0;
    for (int j = 1; j <= max_rounds; ++j)
        if (reached[j] > 0) last_reached = j;
    stats.per_round_success_freq.resize(last_reached, 0.0);
    stats.reached_round.assign(reached.begin() + 1, reached.begin() + 1 + last_reached);
    for (int j = 1; j <= last_reached; ++j) {
        if (reached[j] > 0)
            stats.per_round_success_freq[j - 1] =
                static_cast<double>(elected[j]) / static_cast<double>(reached[j]);
    }
    return stats;
}

DominanceReport dominance_check(std::span<const double> p_seq, std::span<const double> q_seq,
                                std::uint64_t samples, std::uint64_t seed) {
    if (p_seq.size() != q_seq.size())
        throw PreconditionError("dominance sequences must have equal length");
    for (std::size_t i = 0; i < p_seq.size(); ++i) {
        if (p_seq[i] < 0.0 || p_seq[i] > 1.0 || q_seq[i] < 0.0 || q_seq[i] > 1.0)
            throw PreconditionError("dominance sequences must lie in [0, 1]");
        if (p_seq[i] > q_seq[i])
            throw PreconditionError("dominance requires p_i <= q_i at every index");
    }
    if (samples == 0) throw ConfigError("sample count must be positive");

    std::vector<double> lo(p_seq.begin(), p_seq.end());
    std::vector<double> hi(q_seq.begin(), q_seq.end());
    lo.push_back(1.0);
    hi.push_back(1.0);
    const std::size_t len = lo.size();

    DominanceReport report;
    report.samples = samples;
    std::vector<std::uint64_t> count_h(len, 0), count_k(len, 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const std::uint64_t key = (s + 1) * kGolden;
        std::size_t h = 0, k = 0;
        for (std::size_t j = 0; j < len; ++j) {
            const double u = to_unit(station_draw(slot_salt(seed, 1, static_cast<std::uint32_t>(j + 1)), key));
            if (k == 0 && u < hi[j]) k = j + 1;
            if (u < lo[j]) {
                h = j + 1;
                break;
            }
        }
        if (k == 0 || k > h) ++report.coupling_violations;
        ++count_h[h - 1];
        ++count_k[k - 1];
    }
    report.cdf_first_low.resize(len);
    report.cdf_first_high.resize(len);
    std::uint64_t ch = 0, ck = 0;
    for (std::size_t j = 0; j < len; ++j) {
        ch += count_h[j];
        ck += count_k[j];
        report.cdf_first_low[j] = static_cast<double>(ch) / static_cast<double>(samples);
        report.cdf_first_high[j] = static_cast<double>(ck) / static_cast<double>(samples);
    }
    return report;
}

std::vector<SweepRow> sweep(std::span<const int> n_values, std::span<const double> alpha_values,
                            Protocol protocol, int trials, std::uint64_t seed, int workers) {
    std::vector<SweepRow> rows;
    rows.reserve(n_values.size() * alpha_values.size());
    const double q_ref = protocol == Protocol::Alg1 ? kQ1Reference : kQ2Reference;
    const double awake_factor = protocol == Protocol::Alg1 ? 2.0 : 2.5;

    for (int n : n_values) {
        for (double alpha : alpha_values) {
            SweepRow row;
            row.n = n;
            row.alpha = alpha;
            row.q_reference = q_ref;
            row.c_reference = c_of_alpha(q_ref, alpha);  // DomainError propagates
            row.critical_round = critical_round(n, alpha);
            const double log2n = std::log2(static_cast<double>(n));
            row.predicted_slot_bound = row.c_reference * log2n;
            row.predicted_awake_scale = awake_factor * std::log(log2n) / std::log(alpha);

            TrialConfig config;
            config.params = protocol == Protocol::Alg1 ? ProtocolParams::alg1(alpha)
                                                       : ProtocolParams::alg2(alpha);
            config.n = n;
            config.trials = trials;
            config.workers = workers;
            // Stable per-cell seed: adding or removing cells leaves the
            // other cells' trials unchanged.
            config.master_seed =
                mix64(seed ^ mix64(static_cast<std::uint64_t>(n)) ^
                      std::bit_cast<std::uint64_t>(alpha) ^ static_cast<std::uint64_t>(protocol));
            row.stats = run_trials(config);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace relect
