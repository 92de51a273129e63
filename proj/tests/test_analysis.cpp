#include <cmath>

#include "doctest.h"
#include "relect/analysis.hpp"
#include "test_util.hpp"

using namespace relect;

TEST_CASE("series constants are reproduced to 12 digits and match the references") {
    const AnalysisConstants k = series_constants();
    CHECK(near(k.series_m2_undamped, 1.670200478558, 1e-12));
    CHECK(near(k.series_m1_undamped, 1.960764344472, 1e-12));
    CHECK(near(k.series_m2_damped, 0.771493404118, 1e-12));
    CHECK(near(k.series_m1_damped, 0.827403698385, 1e-12));
    CHECK(near(k.s_inf_alg1, 0.188209330, 1e-9));
    CHECK(near(k.s_inf_alg2, 0.462322119, 1e-9));
    CHECK(near(k.p_inf_alg1, 0.369034143, 1e-9));
    CHECK(near(k.p_inf_alg2, 0.382527031, 1e-9));
    CHECK(near(k.q1, 0.6309, 1e-12));
    CHECK(near(k.q2, 0.6174, 1e-12));
    // recomputed q must stay within 1e-3 of the pinned references
    CHECK(std::abs(k.q1 - kQ1Reference) <= 1e-3);
    CHECK(std::abs(k.q2 - kQ2Reference) <= 1e-3);
    CHECK(k.q1 >= 0.62);
    CHECK(k.q1 <= 0.64);
    CHECK(k.q2 >= 0.61);
    CHECK(k.q2 <= 0.63);
}

TEST_CASE("critical round index") {
    CHECK(critical_round(256, 2.0) == 3);
    CHECK(critical_round(2, 1.7) == 0);
    CHECK(critical_round(2, 1.01) == 0);
    CHECK(critical_round(65536, 1.3361) == 10);
    CHECK_THROWS_AS(critical_round(1, 2.0), DomainError);
}

TEST_CASE("unique broadcast probability") {
    CHECK(near(unique_broadcast_prob(2, 1), 0.5, 1e-15));
    CHECK(near(unique_broadcast_prob(1, 1), 0.5, 1e-15));
    CHECK(near(unique_broadcast_prob(2, 2), 0.375, 1e-15));
    // n=3, k=2: three ways, each (1/4)(3/4)^2
    CHECK(near(unique_broadcast_prob(3, 2), 27.0 / 64.0, 1e-15));
    CHECK_THROWS_AS(unique_broadcast_prob(0, 1), ConfigError);
}

TEST_CASE("alg1 round formula") {
    const RoundProbabilities rp = p_round_alg1_formula(2, 1, 2.0);
    CHECK(near(rp.success, 0.5, 1e-12));
    CHECK(near(rp.all_miss, 0.3125, 1e-12));

    CHECK(p_round_alg1_formula(1000000, 1, 2.0).success < 1e-3);

    // vanishing for fixed j as n grows through powers of two
    double prev = 1.0;
    for (int e = 8; e <= 20; e += 4) {
        const double p = p_round_alg1_formula(std::int64_t{1} << e, 2, 1.3361).success;
        CHECK(p <= prev);
        prev = p;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("alg2 round formula") {
    const RoundProbabilities rp = p_round_alg2_formula(2, 1, 2.0);
    CHECK(near(rp.success, 0.1484375, 1e-12));
    CHECK(near(rp.all_miss, 217.0 / 256.0, 1e-12));
    CHECK(p_round_alg2_formula(1000000, 1, 2.0).success < 1e-3);

    // pair-model success stays below the reference complement at the
    // critical round for desk-scale n
    for (int e = 10; e <= 20; e += 2) {
        const std::int64_t n = std::int64_t{1} << e;
        const int j = critical_round(n, 1.3295) + 1;
        CHECK(p_round_alg2_formula(n, j, 1.3295).success <= 0.385);
    }
}

TEST_CASE("exact alg1 round oracle") {
    CHECK(near(exact_round_success_alg1(2, 1, 2.0), 0.59375, 1e-15));
    CHECK_THROWS_AS(exact_round_success_alg1(65, 1, 2.0), SizeError);
    // a round whose wake probabilities all vanish elects nobody
    CHECK(exact_round_success_alg1(2, 1, 2.0, 400) <= 1e-30);

    for (int n : {2, 4, 8, 16}) {
        for (int j = 1; j <= 4; ++j) {
            for (double alpha : {1.3361, 2.0}) {
                const double dp = exact_round_success_alg1(n, j, alpha);
                const double formula = p_round_alg1_formula(n, j, alpha).success;
                CHECK(dp >= formula - 1e-12);
                CHECK(dp >= 0.0);
                CHECK(dp <= 1.0);
            }
        }
    }
}

TEST_CASE("exact alg2 round oracle") {
    CHECK(near(exact_round_success_alg2(2, 1, 2.0), 0.150390625, 1e-15));
    // frozen from an independent by-hand evaluation of the witness-set chain
    CHECK(near(exact_round_success_alg2(3, 1, 2.0), 0.2314453125, 1e-12));
    CHECK_THROWS_AS(exact_round_success_alg2(9, 1, 2.0), SizeError);
    CHECK(exact_round_success_alg2(2, 1, 2.0, 400) <= 1e-30);
    // the formula and the oracle are close but neither dominates in general;
    // both stay in [0, 1]
    for (int n : {2, 3, 5, 8}) {
        for (int j = 1; j <= 4; ++j) {
            const double dp = exact_round_success_alg2(n, j, 1.3295);
            CHECK(dp >= 0.0);
            CHECK(dp <= 1.0);
        }
    }
}

TEST_CASE("cost function and its domain") {
    CHECK(near(c_of_alpha(0.6305, 1.3361), 8.83723, 1e-4));
    CHECK(near(c_of_alpha(0.6176, 1.3295), 8.95995, 1e-4));
    CHECK(near(c_of_alpha(1.0, 2.0), 8.0, 1e-12));
    CHECK_THROWS_AS(c_of_alpha(0.6305, 2.71), DomainError);
    CHECK_THROWS_AS(c_of_alpha(0.6305, 1.0), DomainError);
    CHECK_THROWS_AS(c_of_alpha(1.5, 2.0), DomainError);

    // divergence toward both endpoints
    const double amax = 1.0 / (1.0 - 0.6305);
    CHECK(c_of_alpha(0.6305, 1.0 + 1e-4) > 1e3);
    CHECK(c_of_alpha(0.6305, amax - 1e-4) > 1e3);

    const CostProfile profile = cost_profile(0.6305, 1.3361);
    CHECK(near(profile.alpha_max, amax, 1e-12));
    CHECK(std::isinf(cost_profile(1.0, 2.0).alpha_max));
}

TEST_CASE("optimal alpha") {
    const OptimalAlpha o1 = optimal_alpha(0.6305);
    CHECK(near(o1.alpha_star, 1.336123, 1e-4));
    CHECK(near(o1.c_star, 8.837228, 1e-4));
    const OptimalAlpha o2 = optimal_alpha(0.6176);
    CHECK(near(o2.alpha_star, 1.329567, 1e-4));
    CHECK(near(o2.c_star, 8.959953, 1e-4));
    const OptimalAlpha o3 = optimal_alpha(1.0);
    CHECK(near(o3.alpha_star, 1.5, 1e-6));
    CHECK(near(o3.c_star, 6.75, 1e-9));
}

TEST_CASE("dyadic harmonic sums") {
    CHECK(harmonic_exp_sum(1024, 0) == 0.0);
    const double ln2 = std::log(2.0);
    CHECK(near(harmonic_exp_sum(std::int64_t{1} << 20, 60), 1.0 / ln2, 1e-4));
    CHECK(near(harmonic_exp_sum(std::int64_t{1} << 10, 30), 1.0 / ln2, 2e-3));
    CHECK(near(harmonic_exp_power_sum(std::int64_t{1} << 20, 1, 1, 60),
               harmonic_exp_sum(std::int64_t{1} << 20, 60), 1e-12));
    CHECK(near(harmonic_exp_power_sum(std::int64_t{1} << 20, 2, 1, 60), 2.0 / (8.0 * ln2), 1e-3));
    CHECK(near(harmonic_exp_power_sum(std::int64_t{1} << 20, 3, 1, 60), 6.0 / (81.0 * ln2), 1e-3));
}
