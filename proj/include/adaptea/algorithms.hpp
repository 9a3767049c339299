#pragma once

// The (1,lambda) EA variants: self-adaptive rate (rate ladder, coin-flip
// inheritance, biased or random tie-breaking), static rate 1/n and the
// fitness-dependent rate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptea/core.hpp"

namespace adaptea {

enum class Variant { self_adaptive, static_rate, fitness_dependent };
enum class TieBreak { prefer_low_rate, random };

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(TieBreak t) noexcept;
Variant parse_variant(std::string_view s);
TieBreak parse_tie_break(std::string_view s);

struct AlgorithmConfig {
    std::size_t n = 100;
    std::size_t lambda = 12;
    double F = 1.2;
    int r_init_exponent = 1;  // r_init = F^r_init_exponent
    TieBreak tie_break = TieBreak::prefer_low_rate;
    Variant variant = Variant::self_adaptive;
    std::uint64_t max_generations = 0;  // 0 selects default_max_generations()
    std::uint64_t seed = 0;
};

/// 100 * (n ln n / lambda + n), rounded up.
std::uint64_t default_max_generations(std::size_t n, std::size_t lambda);

/// Throws std::invalid_argument for inconsistent configurations.
void validate(const AlgorithmConfig& cfg);

struct Individual {
    SearchPoint point;
    int rate_exponent = 1;
};

struct TraceEntry {
    std::uint64_t generation;
    std::size_t distance;
    int rate_exponent;  // 0 for variants without a ladder
    double rate;        // mutation strength r of the parent (probability r/n)

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct RunRecord {
    std::vector<TraceEntry> trace;
    std::optional<std::uint64_t> generations_to_optimum;
    std::uint64_t generations = 0;
    std::uint64_t evaluations = 0;  // lambda * generations
    std::uint64_t seed = 0;
    AlgorithmConfig config;

    bool found() const noexcept { return generations_to_optimum.has_value(); }
};

/// One offspring as seen by selection.
struct Candidate {
    std::size_t distance;
    bool low_rate;  // created with r/F
};

/// Streaming form of the selection rule: feed offspring in creation order,
/// read the winner at the end. Ties are resolved by reservoir sampling, so the
/// winner is uniform over the preferred class of minimal-distance offspring.
class BestTracker {
public:
    explicit BestTracker(TieBreak rule) : rule_(rule) {}

    /// Returns true if the offered candidate became the current winner.
    bool offer(const Candidate& c, Rng& rng);
    bool empty() const noexcept { return seen_ == 0; }
    std::size_t index() const noexcept { return best_index_; }
    const Candidate& best() const noexcept { return best_; }

private:
    TieBreak rule_;
    Candidate best_{0, false};
    std::size_t best_index_ = 0;
    std::size_t seen_ = 0;
    std::size_t ties_ = 0;
};

std::size_t select_best(std::span<const Candidate> offspring, TieBreak rule, Rng& rng);

/// max(ln(lambda) / (n ln(e n / d)), 1/n); throws for d == 0 or d > n.
double fitness_dependent_rate(std::size_t d, std::size_t n, std::size_t lambda);

/// Runs generations on a fixed problem size. Offspring are represented by
/// their flip counts; positions are drawn only for the winner and applied to
/// the parent.
class GenerationEngine {
public:
    GenerationEngine(const AlgorithmConfig& cfg);

    const AlgorithmConfig& config() const noexcept { return cfg_; }
    const std::optional<RateLadder>& ladder() const noexcept { return ladder_; }

    /// One generation of the self-adaptive EA: the winner's exponent is clamped.
    void step_self_adaptive(Individual& parent, Rng& rng);
    /// One generation with every offspring mutated at strength `rate`.
    void step_fixed_rate(SearchPoint& parent, double rate, Rng& rng);

    /// Mutation strength the configured variant uses for a parent.
    double parent_rate(std::size_t distance, int exponent) const;

private:
    AlgorithmConfig cfg_;
    std::optional<RateLadder> ladder_;
    FlipScratch scratch_;
    std::vector<std::uint32_t> flips_;
};

Individual step_self_adaptive(const Individual& parent, const AlgorithmConfig& cfg,
                              const RateLadder& ladder, Rng& rng);

/// Deterministic in (cfg.seed, cfg).
RunRecord run(const AlgorithmConfig& cfg);

}  // namespace adaptea
