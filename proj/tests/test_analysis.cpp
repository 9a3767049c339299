#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adaptea/analysis.hpp"
#include "oracles.hpp"

using namespace adaptea;
using namespace adaptea::analysis;

TEST_CASE("jump distribution of two bits") {
    const auto d = exact_jump_distribution(2, 1, 1.0);
    CHECK(d.at(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.at(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.at(-1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.at(2) == 0.0);
}

TEST_CASE("jump distribution matches mask enumeration at n=12, k=5, r=3") {
    const auto d = exact_jump_distribution(12, 5, 3.0);
    const auto o = oracle::enumerate_jump(12, 5, 3);
    REQUIRE(o.total() == o.denominator);
    double tv = 0;
    for (long long delta = -7; delta <= 5; ++delta) tv += std::abs(d.at(delta) - o.prob(delta));
    CHECK(tv / 2 < 1e-12);
    CHECK(std::abs(d.total() - 1.0) < 1e-12);
}

TEST_CASE("jump distributions sum to one and are nonnegative") {
    for (auto [n, k, r] : {std::tuple{1000u, 300u, 50.0}, {100000u, 17u, 1.2}, {64u, 64u, 16.0}, {10u, 0u, 5.0}}) {
        const auto d = exact_jump_distribution(n, k, r);
        CHECK(std::abs(d.total() - 1.0) < 1e-12);
        for (double p : d.probs) CHECK(p >= 0.0);
    }
    CHECK_THROWS(exact_jump_distribution(10, 11, 1.0));
    CHECK_THROWS(exact_jump_distribution(10, 5, 11.0));
    CHECK_THROWS(exact_jump_distribution(10, 5, -1.0));
}

TEST_CASE("local probabilities") {
    const auto a = local_probabilities(4, 2, 1.0);
    CHECK(a.p_prime == doctest::Approx(0.5625).epsilon(1e-15));
    const auto b = local_probabilities(7, 7, 2.0);
    CHECK(b.p_prime == 1.0);
    const auto c = local_probabilities(2, 1, 1.0);
    CHECK(c.p_minus == doctest::Approx(0.25));
    CHECK(c.p_zero == doctest::Approx(0.5));

    // p_minus + p_zero + P(worse) = 1, and p' equals the marginal over good flips.
    const std::size_t n = 200, k = 30;
    const double r = 3.0, p = r / n;
    const auto lp = local_probabilities(n, k, r);
    const auto d = exact_jump_distribution(n, k, r);
    double worse = 0;
    for (long long delta = d.min_delta(); delta < 0; ++delta) worse += d.at(delta);
    CHECK(std::abs(lp.p_minus + lp.p_zero + worse - 1.0) < 1e-12);
    const auto good = oracle::binomial_pmf(k, p);
    double marginal = 0;
    for (double g : good) marginal += g;
    marginal *= std::pow(1 - p, double(n - k));
    CHECK(std::abs(lp.p_prime - marginal) < 1e-12);
    CHECK_THROWS(local_probabilities(10, 0, 1.0));
}

TEST_CASE("rate thresholds") {
    const std::size_t n = 100000;
    const double k = n / std::numbers::e;
    CHECK(lower_threshold(n, 32.0, k) == doctest::Approx(1.0 / 64));
    CHECK_THROWS_AS(upper_threshold(n, n / 2.0), std::domain_error);
    CHECK(upper_threshold(n, 0.35 * n) == doctest::Approx(1.65 / (22 * 0.09)));
    CHECK(upper_threshold(n, 0.35 * n) == doctest::Approx(0.8333).epsilon(1e-4));
    const std::size_t lambda = 1000;
    CHECK(rate_upper(n, lambda, 0.35 * n - 1) / std::log(double(lambda)) == doctest::Approx(0.926).epsilon(1e-3));
    CHECK(rate_upper(n, lambda, 0.35 * n) ==
          doctest::Approx(double(n) * n * std::log(1000.0) / (12 * std::pow(0.3 * n, 2))));
    CHECK(rate_lower(n, lambda, 2.0, 200) == 2.0);
    CHECK(rate_lower(n, lambda, 2.0, 20000) ==
          doctest::Approx(lower_threshold(n, 2.0, 20000) * std::log(1000.0) / 2));
    CHECK_THROWS_AS(rate_lower(n, lambda, 2.0, 50), std::domain_error);
    const auto t = rate_thresholds(n, lambda, 2.0, 60000);
    CHECK_FALSE(t.U.has_value());
    CHECK_FALSE(t.r_u.has_value());
}

TEST_CASE("rate increase probability with one offspring is one half") {
    Rng rng(17);
    const auto rep = estimate_rate_increase_prob(1000, 300, 4.0, 2.0, 1, TieBreak::prefer_low_rate, 100000, rng);
    CHECK(std::abs(rep.estimate - 0.5) <= 3 * std::sqrt(0.25 / 100000));
}

TEST_CASE("rate increase probability on a constant landscape is 2^-lambda") {
    Rng rng(18);
    for (std::size_t lambda : {1u, 2u, 4u, 6u}) {
        const auto rep = estimate_rate_increase_prob(1000, 300, 4.0, 2.0, lambda, TieBreak::prefer_low_rate,
                                                     100000, rng, Landscape::constant);
        const double q = std::pow(0.5, double(lambda));
        CHECK(std::abs(rep.estimate - q) <= 3 * std::sqrt(q * (1 - q) / 100000) + 1e-12);
    }
}

TEST_CASE("near-region rate increase stays below ten times the first bound") {
    Rng rng(19);
    const auto rep = estimate_rate_increase_prob(10000, 200, 32.0, 32.0, 100, TieBreak::prefer_low_rate,
                                                 100000, rng);
    REQUIRE(rep.kind == BoundKind::upper);
    const double first = 100.0 * 200 * 32 * 32 / 10000 * std::exp(-1024.0);
    CHECK(rep.bound == doctest::Approx(std::min(first, std::exp(-9.0 * 32))));
    CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("chain occupancy products") {
    const double p[] = {0.1, 0.1 / 0.9};
    const auto q = occupancy_products(p);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == 1.0);
    CHECK(q[1] == doctest::Approx(1.0 / 9));
    CHECK(q[2] == doctest::Approx(1.0 / 72));
    try {
        chain_occupancy(p);
        FAIL("expected a precondition error");
    } catch (const OccupancyPreconditionError& e) {
        CHECK(e.index() == 2);
    }
    const double constant[] = {0.2, 0.2, 0.2};
    CHECK_THROWS_AS(chain_occupancy(constant), OccupancyPreconditionError);

    std::vector<double> geometric;
    for (int j = 1; j <= 4; ++j) geometric.push_back(std::exp(-9.0 * std::pow(32.0, j)));
    const auto g = chain_occupancy(geometric);
    CHECK(g[1] <= std::exp(-8.0 * 32));
}

TEST_CASE("birth-death simulation edge cases") {
    Rng rng(2);
    const double zeros[] = {0.0, 0.0, 0.0};
    CHECK(simulate_birth_death(zeros, 100, 10, rng)[0] == 1.0);
    const double some[] = {0.3, 0.1};
    CHECK(simulate_birth_death(some, 0, 10, rng)[0] == 1.0);
}

TEST_CASE("birth-death occupancy is dominated by the chain bound") {
    Rng rng(4);
    const std::vector<double> p{0.2, 0.1, 0.05, 0.02};
    const auto q = chain_occupancy(p);
    const std::size_t trials = 1000;
    const auto emp = simulate_birth_death(p, 2000, trials, rng);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(emp[i] <= q[i] + 3 * std::sqrt(q[i] * (1 - q[i]) / trials));
}

TEST_CASE("fitness drift") {
    Rng rng(6);
    const auto at_opt = average_fitness_drift(1000, 0, 2.0, 2.0, 10, Variant::self_adaptive, 10000, rng);
    CHECK(at_opt.estimate <= 0.0);

    const auto half = average_fitness_drift(1000, 500, 2.0, 2.0, 1000, Variant::self_adaptive, 10000, rng);
    CHECK(half.lower() > 0.0);

    // At n=1000 the rate F r = 1024 exceeds n, so the 0.35n case runs at n=10^4.
    CHECK_THROWS(average_fitness_drift(1000, 350, 32.0, 32.0, 100, Variant::self_adaptive, 10, rng));
    const auto mid = average_fitness_drift(10000, 3500, 32.0, 32.0, 100, Variant::self_adaptive, 100000, rng);
    CHECK(mid.lower() >= 0.0);
}

TEST_CASE("potential") {
    CHECK(potential(0, 32, 32) == 0.0);
    CHECK(potential(10, 32, 32) == 10.0);
    CHECK(potential(10, 64, 32) == 10.0 + 64 * 32);
}

TEST_CASE("potential drift in the near region") {
    Rng rng(9);
    const auto rep = potential_drift_estimate(10000, 200, 32.0, 50, 1, 100000, rng);
    CHECK(rep.lower() > 0.0);
    CHECK(rep.bound == doctest::Approx(0.1));
    CHECK_THROWS_AS(potential_drift_estimate(10000, 200, 32.0, 50, 2, 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(potential_drift_estimate(10000, 200, 32.0, 151, 1, 10, rng), std::invalid_argument);
}

TEST_CASE("tail bound") {
    CHECK(tail_bound_check(50, 10, 3, 0).bound == 1.0);
    const auto small = tail_bound_check(12, 5, 3, 4);
    const auto o = oracle::enumerate_jump(12, 5, 3);
    double tail = 0;
    for (long long delta = -7; delta <= 5; ++delta)
        if (double(-delta) >= small.threshold - 1e-9) tail += o.prob(delta);
    CHECK(small.exact == doctest::Approx(tail).epsilon(1e-12));
    CHECK(small.holds());
    CHECK(tail_bound_check(100, 40, 10, 15).holds());
    CHECK_THROWS(tail_bound_check(10, 4, 6, 1));
    CHECK(default_tail_grid().size() >= 50);
}

TEST_CASE("report verdicts apply the slack factor") {
    DriftReport r;
    r.kind = BoundKind::upper;
    r.bound = 0.01;
    r.estimate = 0.09;
    r.half_width = 0.0;
    judge(r);
    CHECK(r.verdict == Verdict::pass);
    r.estimate = 0.2;
    judge(r);
    CHECK(r.verdict == Verdict::flag);
    r.kind = BoundKind::lower;
    r.bound = 1.0;
    r.estimate = 0.05;
    judge(r);
    CHECK(r.verdict == Verdict::flag);
    r.kind = BoundKind::none;
    judge(r);
    CHECK(r.verdict == Verdict::no_bound);
}
