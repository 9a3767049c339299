#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "adaptea/core.hpp"
#include "oracles.hpp"

using namespace adaptea;

TEST_CASE("fitness distance counts zero bits") {
    CHECK(fitness_distance(SearchPoint::all_ones(8)) == 0);
    CHECK(fitness_distance(SearchPoint::all_zeros(8)) == 8);
    CHECK(fitness_distance(SearchPoint::from_string("10110")) == 2);
    CHECK_THROWS_AS(SearchPoint::from_string("10a"), std::invalid_argument);
}

TEST_CASE("search point flips keep the cached distance current") {
    auto x = SearchPoint::all_ones(130);
    x.flip(0);
    x.flip(129);
    x.flip(64);
    CHECK(x.distance() == 3);
    const std::uint32_t pos[] = {0, 5};
    x.flip_all(pos);
    CHECK(x.distance() == 3);
    CHECK(x.bit(0));
    CHECK_FALSE(x.bit(5));
    CHECK(SearchPoint::from_string(x.to_string()) == x);
}

TEST_CASE("rate ladder tops out at the largest power not above n/(2F)") {
    const auto a = build_ladder(32.0, 100000);
    CHECK(a.max_exponent() == 2);
    CHECK(a.max_rate() == doctest::Approx(1024.0));

    const auto b = build_ladder(1.2, 100);
    CHECK(b.max_exponent() == 20);
    CHECK(b.max_rate() == doctest::Approx(38.3376).epsilon(1e-4));
    CHECK(std::pow(1.2, 20) <= 100.0 / 2.4);
    CHECK(std::pow(1.2, 21) > 100.0 / 2.4);

    const auto c = build_ladder(2.0, 16);
    CHECK(c.max_exponent() == 2);
    CHECK(c.max_rate() == 4.0);

    for (int i = 1; i < b.max_exponent(); ++i) CHECK(b.rate(i) < b.rate(i + 1));
    CHECK_THROWS_AS(build_ladder(1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_ladder(32.0, 100), std::invalid_argument);
}

TEST_CASE("clamp exponent") {
    const auto ladder = build_ladder(2.0, 128);  // n/(2F) = 32 -> i_max 5
    REQUIRE(ladder.max_exponent() == 5);
    CHECK(clamp_exponent(0, ladder) == 1);
    CHECK(clamp_exponent(7, ladder) == 5);
    CHECK(clamp_exponent(3, ladder) == 3);
}

TEST_CASE("mutation with strength zero copies and rejects out-of-range strengths") {
    Rng rng(3);
    const auto x = SearchPoint::uniform(77, rng);
    CHECK(standard_bit_mutation(x, 0.0, rng) == x);
    CHECK_THROWS_AS(standard_bit_mutation(x, -0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(standard_bit_mutation(x, 78.0, rng), std::invalid_argument);
    CHECK(standard_bit_mutation(x, 77.0, rng).distance() == 77 - x.distance());
}

TEST_CASE("mutation leaves the parent unchanged with probability (1-1/n)^n") {
    Rng rng(11);
    const auto x = SearchPoint::from_string("1011001110");
    const int samples = 1000000;
    int copies = 0;
    for (int i = 0; i < samples; ++i) copies += standard_bit_mutation(x, 1.0, rng) == x;
    const double p = std::pow(0.9, 10);
    CHECK(p == doctest::Approx(0.348678).epsilon(1e-6));
    const double sigma = std::sqrt(p * (1 - p) / samples);
    CHECK(std::abs(copies / double(samples) - p) <= 3 * sigma);
}

TEST_CASE("mutation flip counts follow Binomial(n, r/n)") {
    Rng rng(21);
    const unsigned n = 100;
    const auto x = SearchPoint::all_ones(n);
    std::vector<std::uint64_t> counts(n + 1, 0);
    const int samples = 100000;
    double sum = 0;
    for (int i = 0; i < samples; ++i) {
        const auto k = standard_bit_mutation(x, 2.0, rng).distance();
        ++counts[k];
        sum += double(k);
    }
    CHECK(sum / samples == doctest::Approx(2.0).epsilon(0.02));
    const auto chi = oracle::chi_square(counts, oracle::binomial_pmf(n, 0.02));
    CHECK(chi.p_value > 1e-3);
}

TEST_CASE("flip positions are uniform within each bit class and distinct") {
    Rng rng(5);
    const auto x = SearchPoint::from_string("11010011101000111011");
    const std::size_t n = x.size(), k = x.distance();
    FlipScratch scratch(n);
    std::vector<std::uint32_t> flips;
    std::vector<std::uint64_t> zeros(n, 0), ones(n, 0);
    for (double rate : {6.0, 17.0}) {
        FlipSampler sampler(n, k, rate);
        for (int i = 0; i < 50000; ++i) {
            sampler.sample(x, rng, scratch, flips);
            std::vector<bool> seen(n, false);
            for (auto p : flips) {
                REQUIRE(p < n);
                REQUIRE_FALSE(seen[p]);
                seen[p] = true;
                ++(x.bit(p) ? ones : zeros)[p];
            }
        }
    }
    std::vector<std::uint64_t> z, o;
    for (std::size_t i = 0; i < n; ++i) (x.bit(i) ? o : z).push_back(x.bit(i) ? ones[i] : zeros[i]);
    CHECK(oracle::chi_square(z, std::vector<double>(z.size(), 1.0 / z.size())).p_value > 1e-3);
    CHECK(oracle::chi_square(o, std::vector<double>(o.size(), 1.0 / o.size())).p_value > 1e-3);
}

TEST_CASE("mutation at strength n flips every bit") {
    Rng rng(1);
    const auto x = SearchPoint::from_string("1100101");
    auto y = standard_bit_mutation(x, 7.0, rng);
    for (std::size_t i = 0; i < 7; ++i) CHECK(y.bit(i) != x.bit(i));
}
