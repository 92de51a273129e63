#include "relect/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "relect/numeric.hpp"
#include "relect/protocol.hpp"

namespace relect {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSeriesCutoff = 1e-15;

double series_sum(int extra_power, bool damped) {
    double total = 0.0;
    double factorial = 1.0;
    for (int m = 1; m <= 60; ++m) {
        if (m > 1) factorial *= m;
        double term = factorial / std::pow(static_cast<double>(m), m + extra_power) / kLn2;
        if (damped) term /= std::ldexp(1.0, m);
        total += term;
        if (term < kSeriesCutoff) break;
    }
    return total;
}

double round_up_4(double x) { return std::ceil(x * 1e4) / 1e4; }

// Slots whose event probability underflows change nothing; cap the scan a
// safe distance past the wake-scale peak so huge late rounds stay cheap.
int last_live_slot(std::int64_t n, int k_start, std::int64_t length) {
    const auto k_dead = static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(n)))) + 80;
    const std::int64_t last = std::min<std::int64_t>(k_start + length - 1, std::max<std::int64_t>(k_dead, k_start));
    return static_cast<int>(last);
}

void validate_round_args(std::int64_t n, int j, double alpha, int k_start) {
    if (n < 1) throw ConfigError("station count must be positive");
    if (j < 1) throw ConfigError("round index must be positive");
    if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
    if (k_start < 1) throw ConfigError("k_start must be positive");
}

// success = sum_k e_k prod_{i != k} (1 - e_i), all_miss = prod_k (1 - e_k),
// via prefix/suffix products; the divided rearrangement is never used.
RoundProbabilities one_success_probability(const std::vector<double>& events) {
    const std::size_t m = events.size();
    std::vector<double> prefix(m + 1, 1.0), suffix(m + 1, 1.0);
    for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * (1.0 - events[i]);
    for (std::size_t i = m; i > 0; --i) suffix[i - 1] = suffix[i] * (1.0 - events[i - 1]);
    RoundProbabilities out;
    out.all_miss = prefix[m];
    for (std::size_t i = 0; i < m; ++i) out.success += events[i] * prefix[i] * suffix[i + 1];
    return out;
}

}  // namespace

AnalysisConstants series_constants() {
    AnalysisConstants c;
    c.series_m2_undamped = series_sum(2, false);
    c.series_m1_undamped = series_sum(1, false);
    c.series_m2_damped = series_sum(2, true);
    c.series_m1_damped = series_sum(1, true);
    c.s_inf_alg1 = std::exp(-c.series_m2_undamped);
    c.s_inf_alg2 = std::exp(-c.series_m2_damped);
    c.p_inf_alg1 = c.s_inf_alg1 * c.series_m1_undamped;
    c.p_inf_alg2 = c.s_inf_alg2 * c.series_m1_damped;
    c.q1 = 1.0 - round_up_4(c.p_inf_alg1 + kFluctuationBudgetPower);
    c.q2 = 1.0 - round_up_4(c.p_inf_alg2 + kFluctuationBudgetPower);
    c.alpha_max_alg1 = 1.0 / (1.0 - c.q1);
    c.alpha_max_alg2 = 1.0 / (1.0 - c.q2);
    return c;
}

int critical_round(std::int64_t n, double alpha) {
    if (n < 2) throw DomainError("critical_round requires n >= 2");
    if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
    const double inner = std::log2(static_cast<double>(n));
    return static_cast<int>(guarded_ceil(std::log(inner) / std::log(alpha)));
}

double unique_broadcast_prob(std::int64_t n, int k) {
    if (n < 1 || k < 1) throw ConfigError("unique_broadcast_prob requires n >= 1, k >= 1");
    const double p = std::ldexp(1.0, -k);
    const double log_term =
        std::log(static_cast<double>(n)) - k * kLn2 + (n - 1) * std::log1p(-p);
    return std::exp(log_term);
}

RoundProbabilities p_round_alg1_formula(std::int64_t n, int j, double alpha, int k_start) {
    validate_round_args(n, j, alpha, k_start);
    const std::int64_t length = round_length(j, alpha);
    const int last = last_live_slot(n, k_start, length);
    std::vector<double> events;
    events.reserve(static_cast<std::size_t>(last - k_start + 1));
    for (int k = k_start; k <= last; ++k) events.push_back(unique_broadcast_prob(n, k));
    return one_success_probability(events);
}

RoundProbabilities p_round_alg2_formula(std::int64_t n, int j, double alpha, int k_start) {
    validate_round_args(n, j, alpha, k_start);
    const std::int64_t length = round_length(j, alpha);
    const int last = last_live_slot(n, k_start, length);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    std::vector<double> events;
    events.reserve(static_cast<std::size_t>(last - k_start + 1));
    for (int k = k_start; k <= last; ++k) {
        const double p = std::ldexp(1.0, -k);
        const double v = 0.5 * pairs * std::exp(-2.0 * k * kLn2 + (n - 2) * std::log1p(-p));
        if (v > 1.0) throw DomainError("pair-event probability above 1; model misapplied");
        events.push_back(v);
    }
    return one_success_probability(events);
}

double exact_round_success_alg1(int n, int j, double alpha, int k_start) {
    validate_round_args(n, j, alpha, k_start);
    if (n > 64) throw SizeError("exact alg1 round oracle limited to n <= 64");
    const std::int64_t length = round_length(j, alpha);
    const int last = last_live_slot(n, k_start, length);

    // dist[c] = P(c distinct candidates so far). Given a unique broadcaster,
    // it is a uniform station independent of history.
    std::vector<double> dist(n + 1, 0.0), next(n + 1, 0.0);
    dist[0] = 1.0;
    for (int k = k_start; k <= last; ++k) {
        const double u = unique_broadcast_prob(n, k);
        if (u < 1e-20) continue;
        for (int c = 0; c <= n; ++c) {
            const double mass = dist[c];
            if (mass == 0.0) continue;
            const double hit_existing = u * c / n;
            next[c] += mass * (1.0 - u + hit_existing);
            if (c < n) next[c + 1] += mass * (u * (n - c) / n);
        }
        std::swap(dist, next);
        std::fill(next.begin(), next.end(), 0.0);
    }
    return dist[1];
}

double exact_round_success_alg2(int n, int j, double alpha, int k_start) {
    validate_round_args(n, j, alpha, k_start);
    if (n > 8) throw SizeError("exact alg2 round oracle limited to n <= 8");
    const std::int64_t length = round_length(j, alpha);
    const int last = last_live_slot(n, k_start, length);
    const int nsub = 1 << n;

    // dist[W] = P(witness set == W). In a slot with a unique sender, every
    // listener joins the set; each station independently sleeps (1-p),
    // sends (p/2) or listens (p/2).
    std::vector<double> dist(nsub, 0.0), next(nsub, 0.0);
    dist[0] = 1.0;
    std::vector<std::pair<int, double>> listener_sets;
    for (int k = k_start; k <= last; ++k) {
        const double p = std::ldexp(1.0, -k);
        if (p == 0.0) break;
        listener_sets.clear();
        double stay = 1.0;
        for (int ls = 1; ls < nsub; ++ls) {
            const int l = std::popcount(static_cast<unsigned>(ls));
            if (l > n - 1) continue;
            const double pr = (n - l) * std::pow(p / 2.0, l + 1) * std::pow(1.0 - p, n - 1 - l);
            if (pr == 0.0) continue;
            listener_sets.emplace_back(ls, pr);
            stay -= pr;
        }
        if (listener_sets.empty()) continue;
        for (int w = 0; w < nsub; ++w) next[w] = dist[w] * stay;
        for (int w = 0; w < nsub; ++w) {
            const double mass = dist[w];
            if (mass == 0.0) continue;
            for (const auto& [ls, pr] : listener_sets) next[w | ls] += mass * pr;
        }
        std::swap(dist, next);
    }
    double single = 0.0;
    for (int w = 0; w < nsub; ++w) {
        if (std::popcount(static_cast<unsigned>(w)) == 1) single += dist[w];
    }
    return single;
}

double c_of_alpha(double q, double alpha) {
    if (!(q > 0.0) || q > 1.0) throw DomainError("q must lie in (0, 1]");
    if (!(alpha > 1.0) || alpha * (1.0 - q) >= 1.0)
        throw DomainError("alpha outside (1, 1/(1-q))");
    return q * alpha * alpha * alpha / ((alpha - 1.0) * (1.0 - alpha * (1.0 - q)));
}

CostProfile cost_profile(double q, double alpha) {
    CostProfile p;
    p.q = q;
    p.alpha = alpha;
    p.c = c_of_alpha(q, alpha);
    p.alpha_max = q >= 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - q);
    return p;
}

OptimalAlpha optimal_alpha(double q) {
    if (!(q > 0.0) || q > 1.0) throw DomainError("q must lie in (0, 1]");
    const double hi = q >= 1.0 ? 16.0 : 1.0 / (1.0 - q);
    const double lo = 1.0;
    const double margin = (hi - lo) * 1e-6;
    double a = lo + margin, b = hi - margin;

    // Coarse scan for the global bracket (guards against flat tails).
    const int grid = 512;
    double best_x = a, best_c = c_of_alpha(q, a);
    for (int i = 1; i <= grid; ++i) {
        const double x = a + (b - a) * i / grid;
        const double cx = c_of_alpha(q, x);
        if (cx < best_c) {
            best_c = cx;
            best_x = x;
        }
    }
    const double step = (b - a) / grid;
    a = std::max(lo + margin, best_x - step);
    b = std::min(hi - margin, best_x + step);

    constexpr double kGoldenRatio = 0.6180339887498949;
    while (b - a > 1e-7) {
        const double c1 = b - kGoldenRatio * (b - a);
        const double c2 = a + kGoldenRatio * (b - a);
        if (c_of_alpha(q, c1) < c_of_alpha(q, c2))
            b = c2;
        else
            a = c1;
    }
    const double x = 0.5 * (a + b);
    return {x, c_of_alpha(q, x)};
}

double harmonic_exp_sum(std::int64_t n, int r) {
    if (n < 1) throw ConfigError("harmonic_exp_sum requires n >= 1");
    double total = 0.0;
    for (int k = 1; k <= r; ++k) {
        const double x = std::ldexp(static_cast<double>(n), -k);
        total += x * std::exp(-x);
    }
    return total;
}

double harmonic_exp_power_sum(std::int64_t n, int m, int r1, int r2) {
    if (n < 1 || m < 1) throw ConfigError("harmonic_exp_power_sum requires n >= 1, m >= 1");
    double total = 0.0;
    for (int k = r1; k <= r2; ++k) {
        const double x = std::ldexp(static_cast<double>(n), -k);
        if (!(x > 0.0) || !std::isfinite(x)) continue;  // under/overflowed scale, term is 0
        total += std::exp(m * (std::log(x) - x));
    }
    return total;
}

}  // namespace relect
