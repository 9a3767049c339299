#pragma once

// Search points, the OneMax fitness distance, the exact rate ladder and the
// standard-bit-mutation sampler.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adaptea {

using Rng = std::mt19937_64;

/// Fixed-length bit string packed into 64-bit words. The number of zero bits
/// (the OneMax fitness distance) is cached and kept current by every mutator.
class SearchPoint {
public:
    SearchPoint() = default;
    explicit SearchPoint(std::size_t n);  // all zeros

    static SearchPoint all_ones(std::size_t n);
    static SearchPoint all_zeros(std::size_t n) { return SearchPoint(n); }
    static SearchPoint uniform(std::size_t n, Rng& rng);
    /// Parses a string of '0'/'1' characters, most significant position first.
    static SearchPoint from_string(std::string_view bits);

    std::size_t size() const noexcept { return n_; }
    std::size_t distance() const noexcept { return zeros_; }

    bool bit(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void flip(std::size_t i) noexcept;
    void flip_all(std::span<const std::uint32_t> positions) noexcept;

    std::string to_string() const;
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const SearchPoint& a, const SearchPoint& b) noexcept {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    void recount() noexcept;

    std::size_t n_ = 0;
    std::size_t zeros_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of zero bits of x; 0 iff x is the all-ones optimum.
std::size_t fitness_distance(const SearchPoint& x) noexcept;

/// The admissible rates {F^1, ..., F^i_max} with F^i_max the largest power of F
/// not exceeding n/(2F). Rates are addressed by integer exponent only.
class RateLadder {
public:
    RateLadder(double F, std::size_t n);

    double factor() const noexcept { return F_; }
    std::size_t problem_size() const noexcept { return n_; }
    int max_exponent() const noexcept { return i_max_; }
    double rate(int exponent) const;
    double min_rate() const noexcept { return F_; }
    double max_rate() const { return rate(i_max_); }
    bool contains(int exponent) const noexcept { return exponent >= 1 && exponent <= i_max_; }
    int clamp(int exponent) const noexcept;

private:
    double F_;
    std::size_t n_;
    int i_max_;
};

RateLadder build_ladder(double F, std::size_t n);
int clamp_exponent(int exponent, const RateLadder& ladder) noexcept;

/// Scratch space for sampling distinct flip positions; reusable across calls
/// for one problem size.
class FlipScratch {
public:
    explicit FlipScratch(std::size_t n = 0) : stamps_(n, 0) {}

    bool mark(std::uint32_t pos) noexcept;  // false if already marked this round
    void next_round();
    std::size_t size() const noexcept { return stamps_.size(); }

private:
    std::vector<std::uint32_t> stamps_;
    std::uint32_t epoch_ = 1;
};

struct FlipCounts {
    std::uint64_t good = 0;  // flipped zero bits
    std::uint64_t bad = 0;   // flipped one bits
};

/// Standard bit mutation with strength r for parents at fitness distance k.
/// Flipping each bit independently with probability r/n is sampled as two
/// independent counts, Binomial(k, r/n) zero bits and Binomial(n-k, r/n) one
/// bits, followed by uniform subsets of those sizes. The offspring distance
/// k - good + bad is known from the counts alone, so positions are only drawn
/// for offspring that are kept.
class FlipSampler {
public:
    FlipSampler(std::size_t n, std::size_t k, double rate);

    double probability() const noexcept { return p_; }
    FlipCounts draw_counts(Rng& rng);
    /// Uniform distinct positions: c.good zero bits and c.bad one bits of x.
    void draw_positions(const SearchPoint& x, FlipCounts c, Rng& rng, FlipScratch& scratch,
                        std::vector<std::uint32_t>& out) const;
    void sample(const SearchPoint& x, Rng& rng, FlipScratch& scratch, std::vector<std::uint32_t>& out);

private:
    std::size_t n_;
    std::size_t k_;
    double p_;
    std::binomial_distribution<std::uint64_t> good_;
    std::binomial_distribution<std::uint64_t> bad_;
};

/// Returns a copy of x with every bit flipped independently with probability r/n.
/// Throws std::invalid_argument unless 0 <= r <= n.
SearchPoint standard_bit_mutation(const SearchPoint& x, double rate, Rng& rng);

}  // namespace adaptea
