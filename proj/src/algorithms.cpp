#include "adaptea/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adaptea {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::self_adaptive: return "self-adaptive";
        case Variant::static_rate: return "static";
        case Variant::fitness_dependent: return "fitness-dependent";
    }
    return "?";
}

std::string_view to_string(TieBreak t) noexcept {
    return t == TieBreak::prefer_low_rate ? "biased" : "random";
}

Variant parse_variant(std::string_view s) {
    if (s == "self-adaptive" || s == "sa") return Variant::self_adaptive;
    if (s == "static") return Variant::static_rate;
    if (s == "fitness-dependent" || s == "fd") return Variant::fitness_dependent;
    throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

TieBreak parse_tie_break(std::string_view s) {
    if (s == "biased" || s == "prefer-low-rate") return TieBreak::prefer_low_rate;
    if (s == "random") return TieBreak::random;
    throw std::invalid_argument("unknown tie-break rule '" + std::string(s) + "'");
}

std::uint64_t default_max_generations(std::size_t n, std::size_t lambda) {
    const double nn = static_cast<double>(n);
    const double g = 100.0 * (nn * std::log(nn) / static_cast<double>(lambda) + nn);
    return static_cast<std::uint64_t>(std::ceil(g));
}

void validate(const AlgorithmConfig& cfg) {
    if (cfg.n == 0) throw std::invalid_argument("n must be positive");
    if (cfg.n > std::size_t{1} << 31) throw std::invalid_argument("n too large");
    if (cfg.lambda == 0) throw std::invalid_argument("lambda must be at least 1");
    if (cfg.variant == Variant::self_adaptive) {
        const RateLadder ladder(cfg.F, cfg.n);
        if (!ladder.contains(cfg.r_init_exponent))
            throw std::invalid_argument("r_init exponent " + std::to_string(cfg.r_init_exponent) +
                                        " outside ladder [1.." +
                                        std::to_string(ladder.max_exponent()) + "]");
    }
}

bool BestTracker::offer(const Candidate& c, Rng& rng) {
    const std::size_t idx = seen_++;
    const auto take = [&] {
        best_ = c;
        best_index_ = idx;
        ties_ = 1;
        return true;
    };
    if (idx == 0 || c.distance < best_.distance) return take();
    if (c.distance > best_.distance) return false;
    if (rule_ == TieBreak::prefer_low_rate && c.low_rate != best_.low_rate) {
        return c.low_rate ? take() : false;
    }
    ++ties_;
    std::uniform_int_distribution<std::size_t> pick(0, ties_ - 1);
    if (pick(rng) == 0) {
        best_ = c;
        best_index_ = idx;
        return true;
    }
    return false;
}

std::size_t select_best(std::span<const Candidate> offspring, TieBreak rule, Rng& rng) {
    if (offspring.empty()) throw std::invalid_argument("select_best: empty offspring list");
    BestTracker tracker(rule);
    for (const auto& c : offspring) tracker.offer(c, rng);
    return tracker.index();
}

double fitness_dependent_rate(std::size_t d, std::size_t n, std::size_t lambda) {
    if (d == 0 || d > n) throw std::invalid_argument("fitness_dependent_rate: need 1 <= d <= n");
    const double nn = static_cast<double>(n);
    const double p = std::log(static_cast<double>(lambda)) /
                     (nn * std::log(std::numbers::e * nn / static_cast<double>(d)));
    return std::max(p, 1.0 / nn);
}

GenerationEngine::GenerationEngine(const AlgorithmConfig& cfg) : cfg_(cfg), scratch_(cfg.n) {
    validate(cfg_);
    if (cfg_.variant == Variant::self_adaptive) ladder_.emplace(cfg_.F, cfg_.n);
}

double GenerationEngine::parent_rate(std::size_t distance, int exponent) const {
    switch (cfg_.variant) {
        case Variant::self_adaptive: return ladder_->rate(exponent);
        case Variant::static_rate: return 1.0;
        case Variant::fitness_dependent:
            if (distance == 0) return 1.0;
            return std::min(static_cast<double>(cfg_.n) *
                                fitness_dependent_rate(distance, cfg_.n, cfg_.lambda),
                            static_cast<double>(cfg_.n));
    }
    return 1.0;
}

void GenerationEngine::step_self_adaptive(Individual& parent, Rng& rng) {
    const int i = parent.rate_exponent;
    const std::size_t k = parent.point.distance();
    // Offspring exponents i-1 and i+1 may leave the ladder; only the winner is clamped.
    FlipSampler low(cfg_.n, k, ladder_->rate(i - 1));
    FlipSampler high(cfg_.n, k, ladder_->rate(i + 1));
    std::bernoulli_distribution coin(0.5);
    BestTracker tracker(cfg_.tie_break);
    FlipCounts best{};
    for (std::size_t j = 0; j < cfg_.lambda; ++j) {
        const bool use_low = coin(rng);
        const auto c = (use_low ? low : high).draw_counts(rng);
        if (tracker.offer({k - c.good + c.bad, use_low}, rng)) best = c;
    }
    const bool low_won = tracker.best().low_rate;
    (low_won ? low : high).draw_positions(parent.point, best, rng, scratch_, flips_);
    parent.point.flip_all(flips_);
    parent.rate_exponent = ladder_->clamp(low_won ? i - 1 : i + 1);
}

void GenerationEngine::step_fixed_rate(SearchPoint& parent, double rate, Rng& rng) {
    const std::size_t k = parent.distance();
    FlipSampler sampler(cfg_.n, k, rate);
    BestTracker tracker(TieBreak::random);
    FlipCounts best{};
    for (std::size_t j = 0; j < cfg_.lambda; ++j) {
        const auto c = sampler.draw_counts(rng);
        if (tracker.offer({k - c.good + c.bad, false}, rng)) best = c;
    }
    sampler.draw_positions(parent, best, rng, scratch_, flips_);
    parent.flip_all(flips_);
}

Individual step_self_adaptive(const Individual& parent, const AlgorithmConfig& cfg,
                              const RateLadder& ladder, Rng& rng) {
    if (!ladder.contains(parent.rate_exponent))
        throw std::invalid_argument("step_self_adaptive: parent exponent outside ladder");
    AlgorithmConfig c = cfg;
    c.variant = Variant::self_adaptive;
    c.F = ladder.factor();
    c.n = parent.point.size();
    c.r_init_exponent = parent.rate_exponent;
    GenerationEngine engine(c);
    Individual child = parent;
    engine.step_self_adaptive(child, rng);
    return child;
}

RunRecord run(const AlgorithmConfig& cfg) {
    GenerationEngine engine(cfg);
    RunRecord rec;
    rec.config = cfg;
    rec.seed = cfg.seed;
    const std::uint64_t cap =
        cfg.max_generations ? cfg.max_generations : default_max_generations(cfg.n, cfg.lambda);
    rec.config.max_generations = cap;

    Rng rng(cfg.seed);
    Individual parent{SearchPoint::uniform(cfg.n, rng),
                      cfg.variant == Variant::self_adaptive ? cfg.r_init_exponent : 0};
    const auto record = [&](std::uint64_t t) {
        rec.trace.push_back({t, parent.point.distance(), parent.rate_exponent,
                             engine.parent_rate(parent.point.distance(), parent.rate_exponent)});
    };
    record(0);
    std::uint64_t t = 0;
    while (parent.point.distance() != 0 && t < cap) {
        ++t;
        if (cfg.variant == Variant::self_adaptive) {
            engine.step_self_adaptive(parent, rng);
        } else {
            engine.step_fixed_rate(parent.point,
                                   engine.parent_rate(parent.point.distance(), 0), rng);
        }
        record(t);
    }
    rec.generations = t;
    rec.evaluations = t * cfg.lambda;
    if (parent.point.distance() == 0) rec.generations_to_optimum = t;
    return rec;
}

}  // namespace adaptea
