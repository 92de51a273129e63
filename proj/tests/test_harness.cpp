#include <cmath>
#include <vector>

#include "doctest.h"
#include "relect/analysis.hpp"
#include "relect/harness.hpp"
#include "test_util.hpp"

using namespace relect;

namespace {

TrialConfig small_config(Protocol proto, double alpha, int n, int trials, std::uint64_t seed,
                         int workers = 1) {
    TrialConfig cfg;
    cfg.params = proto == Protocol::Alg1 ? ProtocolParams::alg1(alpha) : ProtocolParams::alg2(alpha);
    cfg.n = n;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.workers = workers;
    return cfg;
}

bool stats_equal(const TrialStats& a, const TrialStats& b) {
    return a.rounds.mean == b.rounds.mean && a.rounds.stddev == b.rounds.stddev &&
           a.probabilistic_slots.mean == b.probabilistic_slots.mean &&
           a.total_slots.mean == b.total_slots.mean && a.awake_mean.mean == b.awake_mean.mean &&
           a.awake_max.mean == b.awake_max.mean &&
           a.round1_success_freq == b.round1_success_freq &&
           a.termination_rate == b.termination_rate &&
           a.per_round_success_freq == b.per_round_success_freq;
}

// Expected number of rounds when per-round success probabilities come from
// the exact oracle and rounds are independent trials.
double expected_rounds_from_oracle(int n, double alpha, int max_rounds) {
    double expectation = 0.0;
    double reach = 1.0;
    int j = 1;
    for (; j <= max_rounds && reach > 1e-15; ++j) {
        const double rho = exact_round_success_alg1(n, j, alpha);
        expectation += j * reach * rho;
        reach *= 1.0 - rho;
    }
    // the residual tail is capped at max_rounds; count it at its floor
    expectation += j * reach;
    return expectation;
}

}  // namespace

TEST_CASE("trial batches are a pure function of the configuration") {
    const TrialConfig cfg = small_config(Protocol::Alg1, 1.5, 8, 500, 11, 1);
    const TrialStats a = run_trials(cfg);
    const TrialStats b = run_trials(cfg);
    CHECK(stats_equal(a, b));

    TrialConfig threaded = cfg;
    threaded.workers = 3;
    const TrialStats c = run_trials(threaded);
    CHECK(stats_equal(a, c));
}

TEST_CASE("trial count must be positive") {
    TrialConfig cfg = small_config(Protocol::Alg1, 1.5, 8, 1, 0);
    cfg.trials = 0;
    CHECK_THROWS_AS(run_trials(cfg), ConfigError);
}

TEST_CASE("round-1 success frequency tracks the exact oracle") {
    const TrialStats stats = run_trials(small_config(Protocol::Alg1, 2.0, 2, 20000, 17));
    const double expected = exact_round_success_alg1(2, 1, 2.0);
    const double sigma = std::sqrt(expected * (1 - expected) / 20000.0);
    CHECK(std::abs(stats.round1_success_freq - expected) <= 3 * sigma);
    CHECK(stats.per_round_success_freq[0] == stats.round1_success_freq);

    const TrialStats stats2 = run_trials(small_config(Protocol::Alg2, 2.0, 2, 20000, 18));
    const double expected2 = exact_round_success_alg2(2, 1, 2.0);
    const double sigma2 = std::sqrt(expected2 * (1 - expected2) / 20000.0);
    CHECK(std::abs(stats2.round1_success_freq - expected2) <= 3 * sigma2);
}

TEST_CASE("slot accounting identity holds in aggregate") {
    for (Protocol proto : {Protocol::Alg1, Protocol::Alg2}) {
        const TrialStats stats =
            run_trials(small_config(proto, 1.5, 8, 400, 23));
        const double overhead = proto == Protocol::Alg1 ? 1.0 : 2.0;
        CHECK(near(stats.total_slots.mean,
                   stats.probabilistic_slots.mean + overhead * stats.rounds.mean, 1e-9));
        CHECK(stats.termination_rate == 1.0);
    }
}

TEST_CASE("dominance check: equality case couples exactly") {
    const std::vector<double> p{0.2, 0.4, 0.6};
    const DominanceReport rep = dominance_check(p, p, 20000, 5);
    CHECK(rep.coupling_violations == 0);
    CHECK(rep.cdf_first_low == rep.cdf_first_high);
    CHECK(rep.cdf_first_low.back() == 1.0);
}

TEST_CASE("dominance check: certain success dominates everything") {
    const std::vector<double> p{0.1, 0.1, 0.1};
    const std::vector<double> q{1.0, 1.0, 1.0};
    const DominanceReport rep = dominance_check(p, q, 5000, 6);
    CHECK(rep.coupling_violations == 0);
    CHECK(rep.cdf_first_high[0] == 1.0);
    for (std::size_t k = 0; k < rep.cdf_first_low.size(); ++k)
        CHECK(rep.cdf_first_high[k] >= rep.cdf_first_low[k]);
}

TEST_CASE("dominance check preconditions") {
    const std::vector<double> p{0.5, 0.2};
    const std::vector<double> q{0.4, 0.3};
    CHECK_THROWS_AS(dominance_check(p, q, 10, 0), PreconditionError);
    const std::vector<double> shorter{0.1};
    CHECK_THROWS_AS(dominance_check(shorter, q, 10, 0), PreconditionError);
    const std::vector<double> bad{1.5, 0.2};
    CHECK_THROWS_AS(dominance_check(bad, bad, 10, 0), PreconditionError);
}

TEST_CASE("sweep rejects alpha outside the reference-q range") {
    const std::vector<int> ns{64};
    const std::vector<double> alphas{2.8};
    CHECK_THROWS_AS(sweep(ns, alphas, Protocol::Alg1, 10, 0), DomainError);
}

TEST_CASE("sweep cell: measured mean rounds match the chained oracle expectation") {
    const std::vector<int> ns{2};
    const std::vector<double> alphas{2.0};
    const auto rows = sweep(ns, alphas, Protocol::Alg1, 10000, 31, 1);
    REQUIRE(rows.size() == 1);
    const SweepRow& row = rows[0];
    CHECK(row.critical_round == 0);
    CHECK(near(row.c_reference, c_of_alpha(kQ1Reference, 2.0), 1e-12));

    const double expected = expected_rounds_from_oracle(2, 2.0, 64);
    const double three_sigma = 3.0 * row.stats.rounds.ci95 / 1.96;
    CHECK(std::abs(row.stats.rounds.mean - expected) <= three_sigma);
}

TEST_CASE("sweep row: measured per-round success sits inside the formula band") {
    // The per-slot-event formula undercounts round wins (a station unique in
    // two slots still wins); the all-miss complement overcounts them. The
    // truth lies between, so the measured conditional frequencies must sit
    // inside [success - 3s, (1 - all_miss) + 3s].
    const std::vector<int> ns{1024};
    const std::vector<double> alphas{1.3361};
    const auto rows = sweep(ns, alphas, Protocol::Alg1, 2000, 37, 1);
    REQUIRE(rows.size() == 1);
    const SweepRow& row = rows[0];
    for (std::size_t idx = static_cast<std::size_t>(row.critical_round);
         idx < row.stats.per_round_success_freq.size(); ++idx) {
        const int j = static_cast<int>(idx) + 1;
        const auto reached = static_cast<double>(row.stats.reached_round[idx]);
        if (reached < 200) break;
        const RoundProbabilities rp = p_round_alg1_formula(1024, j, 1.3361);
        const double freq = row.stats.per_round_success_freq[idx];
        const double sigma_lo = std::sqrt(rp.success * (1 - rp.success) / reached);
        const double hi = 1.0 - rp.all_miss;
        const double sigma_hi = std::sqrt(hi * (1 - hi) / reached);
        CHECK(freq >= rp.success - 3 * sigma_lo);
        CHECK(freq <= hi + 3 * sigma_hi);
    }
}

TEST_CASE("alg1 runs essentially never outlive the critical round by 25") {
    for (double alpha : {1.3361, 2.0}) {
        const TrialStats stats = run_trials(small_config(Protocol::Alg1, alpha, 64, 20000, 41));
        const int jstar = critical_round(64, alpha);
        // trials whose round count exceeded jstar + 25 reached round jstar + 26
        const auto idx = static_cast<std::size_t>(jstar + 25);
        const std::int64_t late = idx < stats.reached_round.size() ? stats.reached_round[idx] : 0;
        CHECK(static_cast<double>(late) / 20000.0 < 1e-4);
        CHECK(stats.termination_rate == 1.0);
    }
}
