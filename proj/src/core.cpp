#include "adaptea/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaptea {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

std::uint64_t tail_mask(std::size_t n) {
    const std::size_t rem = n & 63;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

SearchPoint::SearchPoint(std::size_t n) : n_(n), zeros_(n), words_(word_count(n), 0) {}

SearchPoint SearchPoint::all_ones(std::size_t n) {
    SearchPoint x(n);
    std::fill(x.words_.begin(), x.words_.end(), ~std::uint64_t{0});
    if (!x.words_.empty()) x.words_.back() &= tail_mask(n);
    x.zeros_ = 0;
    return x;
}

SearchPoint SearchPoint::uniform(std::size_t n, Rng& rng) {
    SearchPoint x(n);
    for (auto& w : x.words_) w = rng();
    if (!x.words_.empty()) x.words_.back() &= tail_mask(n);
    x.recount();
    return x;
}

SearchPoint SearchPoint::from_string(std::string_view bits) {
    SearchPoint x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            x.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("SearchPoint: expected '0' or '1'");
        }
    }
    x.recount();
    return x;
}

void SearchPoint::flip(std::size_t i) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    auto& w = words_[i >> 6];
    w ^= m;
    if (w & m) --zeros_; else ++zeros_;
}

void SearchPoint::flip_all(std::span<const std::uint32_t> positions) noexcept {
    for (auto p : positions) flip(p);
}

std::string SearchPoint::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) if (bit(i)) s[i] = '1';
    return s;
}

void SearchPoint::recount() noexcept {
    std::size_t ones = 0;
    for (auto w : words_) ones += static_cast<std::size_t>(std::popcount(w));
    zeros_ = n_ - ones;
}

std::size_t fitness_distance(const SearchPoint& x) noexcept { return x.distance(); }

RateLadder::RateLadder(double F, std::size_t n) : F_(F), n_(n), i_max_(0) {
    if (!(F > 1.0) || !std::isfinite(F)) throw std::invalid_argument("rate ladder: F must be > 1");
    const double cap = static_cast<double>(n) / (2.0 * F);
    // Largest i with F^i <= n/(2F); the tolerance admits exact powers such as F=2, n=16.
    int i = 0;
    while (std::pow(F, i + 1) <= cap * (1.0 + 1e-12)) ++i;
    if (i < 1) throw std::invalid_argument("rate ladder: n/(2F) < F, no admissible rate");
    i_max_ = i;
}

double RateLadder::rate(int exponent) const { return std::pow(F_, exponent); }

int RateLadder::clamp(int exponent) const noexcept { return std::clamp(exponent, 1, i_max_); }

RateLadder build_ladder(double F, std::size_t n) { return RateLadder(F, n); }

int clamp_exponent(int exponent, const RateLadder& ladder) noexcept { return ladder.clamp(exponent); }

bool FlipScratch::mark(std::uint32_t pos) noexcept {
    if (stamps_[pos] == epoch_) return false;
    stamps_[pos] = epoch_;
    return true;
}

void FlipScratch::next_round() {
    if (++epoch_ == 0) {
        std::fill(stamps_.begin(), stamps_.end(), 0);
        epoch_ = 1;
    }
}

FlipSampler::FlipSampler(std::size_t n, std::size_t k, double rate)
    : n_(n), k_(k), p_(n == 0 ? 0.0 : rate / static_cast<double>(n)),
      good_(k, std::clamp(p_, 0.0, 1.0)), bad_(n - std::min(k, n), std::clamp(p_, 0.0, 1.0)) {
    if (!(rate >= 0.0) || rate > static_cast<double>(n))
        throw std::invalid_argument("standard bit mutation: rate must lie in [0, n]");
    if (k > n) throw std::invalid_argument("standard bit mutation: distance exceeds n");
}

FlipCounts FlipSampler::draw_counts(Rng& rng) {
    if (p_ <= 0.0) return {0, 0};
    if (p_ >= 1.0) return {k_, n_ - k_};
    const auto good = good_(rng);
    return {good, bad_(rng)};
}

namespace {

/// Appends `count` distinct uniform positions among the bits of x equal to
/// `value` (there are `members` of them). Uses rejection when that is cheap,
/// otherwise collects the class and draws a partial Fisher-Yates sample.
void pick_from_class(const SearchPoint& x, bool value, std::uint64_t count, std::size_t members, Rng& rng,
                     FlipScratch& scratch, std::vector<std::uint32_t>& out) {
    if (count == 0) return;
    const std::size_t n = x.size();
    const double spare = static_cast<double>(members - count) + 1.0;
    const double reject_cost = static_cast<double>(count) * static_cast<double>(n) / spare;
    const double scan_cost = static_cast<double>(n) / 64.0 + static_cast<double>(members);
    if (reject_cost <= scan_cost) {
        std::uniform_int_distribution<std::uint32_t> pos(0, static_cast<std::uint32_t>(n - 1));
        for (std::uint64_t taken = 0; taken < count;) {
            const auto t = pos(rng);
            if (x.bit(t) == value && scratch.mark(t)) {
                out.push_back(t);
                ++taken;
            }
        }
        return;
    }
    std::vector<std::uint32_t> pool;
    pool.reserve(members);
    const auto words = x.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = value ? words[w] : ~words[w];
        while (bits) {
            const auto b = static_cast<std::size_t>(std::countr_zero(bits));
            const std::size_t p = w * 64 + b;
            if (p >= n) break;
            pool.push_back(static_cast<std::uint32_t>(p));
            bits &= bits - 1;
        }
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
        out.push_back(pool[i]);
    }
}

}  // namespace

void FlipSampler::draw_positions(const SearchPoint& x, FlipCounts c, Rng& rng, FlipScratch& scratch,
                                 std::vector<std::uint32_t>& out) const {
    out.clear();
    out.reserve(c.good + c.bad);
    scratch.next_round();
    pick_from_class(x, false, c.good, k_, rng, scratch, out);
    pick_from_class(x, true, c.bad, n_ - k_, rng, scratch, out);
}

void FlipSampler::sample(const SearchPoint& x, Rng& rng, FlipScratch& scratch, std::vector<std::uint32_t>& out) {
    draw_positions(x, draw_counts(rng), rng, scratch, out);
}

SearchPoint standard_bit_mutation(const SearchPoint& x, double rate, Rng& rng) {
    FlipSampler sampler(x.size(), x.distance(), rate);
    FlipScratch scratch(x.size());
    std::vector<std::uint32_t> flips;
    sampler.sample(x, rng, scratch, flips);
    SearchPoint y = x;
    y.flip_all(flips);
    return y;
}

}  // namespace adaptea
