#pragma once

// Experiment harness: lambda sweeps over EA variants, per-run traces and
// rate profiles, the initial-rate/tie-breaking table, relative runtimes.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adaptea/algorithms.hpp"
#include "adaptea/io.hpp"

namespace adaptea::experiments {

enum class InitialRate { min, max };

struct VariantSpec {
    std::string label;
    Variant variant = Variant::self_adaptive;
    double F = 1.2;
    TieBreak tie = TieBreak::prefer_low_rate;
    InitialRate rinit = InitialRate::min;
};

/// Parses "static", "fitness-dependent" or "self-adaptive:F=1.2[:tie=random][:rinit=max][:label=x]".
VariantSpec parse_variant_spec(std::string_view text);
std::string default_label(const VariantSpec& v);

/// Configuration of one run of `v` on (n, lambda).
AlgorithmConfig make_config(const VariantSpec& v, std::size_t n, std::size_t lambda,
                            std::uint64_t seed, std::uint64_t max_generations = 0);

struct SweepSpec {
    std::size_t n = 100000;
    std::vector<std::size_t> lambdas;
    std::vector<VariantSpec> variants;
    std::size_t repetitions = 100;
    std::uint64_t base_seed = 1;
    std::uint64_t max_generations = 0;  // 0: per-run default
};

void validate(const SweepSpec& spec);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;
/// FNV-1a 64-bit.
std::uint64_t hash_label(std::string_view label) noexcept;
/// Seed of one trial: mix64 chain over (base, hash(label), lambda, rep).
std::uint64_t derive_seed(std::uint64_t base, std::string_view variant_label, std::size_t lambda,
                          std::size_t rep) noexcept;

/// One row of the long-format results CSV.
struct TrialRow {
    std::string variant;
    std::size_t lambda = 0;
    std::size_t n = 0;
    std::string F;      // "-" where not applicable
    std::string tie;    // "-" where not applicable
    std::string rinit;  // "-" where not applicable
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::uint64_t generations = 0;
    bool found = false;

    friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

struct TrialSummary {
    std::string variant;
    std::size_t lambda = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for one repetition
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    std::size_t reps = 0;
    std::size_t found = 0;

    bool capped() const noexcept { return found < reps; }
    friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

/// Groups rows by (variant, lambda) in order of first appearance.
std::vector<TrialSummary> summarize(const std::vector<TrialRow>& rows);

struct SweepResult {
    std::vector<TrialRow> rows;  // ordered by (variant, lambda, rep) as in the spec
    std::vector<TrialSummary> summary;
    const TrialSummary* find(std::string_view variant, std::size_t lambda) const;
};

/// Worker count: `requested` (0 = hardware concurrency), capped by ADAPTEA_THREADS.
unsigned worker_count(unsigned requested = 0);

/// Every trial is seeded from derive_seed, so the result does not depend on
/// execution order or thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline const std::vector<std::string> kResultColumns = {
    "variant", "lambda", "n", "F", "tie", "rinit", "rep", "seed", "generations", "found"};
inline const std::vector<std::string> kSummaryColumns = {
    "variant", "lambda", "mean", "std", "min", "max", "reps", "found"};

io::ConfigEntries describe(const SweepSpec& spec);
void write_results_csv(std::ostream& out, const std::vector<TrialRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<TrialSummary>& summary);
std::vector<TrialRow> parse_results(const io::CsvTable& table);
std::vector<TrialSummary> parse_summary(const io::CsvTable& table);

/// Columns t,k,r, one row per generation (no header; see run_trace).
void write_trace_csv(std::ostream& out, const RunRecord& record);

struct ProfilePoint {
    std::size_t distance;
    double rate;
    std::size_t count;  // generations spent at (distance, rate)
};

/// The set of (d_t, r_t) pairs visited by a run, sorted by distance then rate.
std::vector<ProfilePoint> rate_profile(const RunRecord& record);
void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile);

/// Mean ln(r_t) over generations whose parent distance falls in each tenth of
/// [1, d_max]; NaN for empty bins. Bin 0 holds the smallest distances.
std::array<double, 10> mean_log_rate_by_decile(const RunRecord& record, std::size_t d_max);

io::ConfigEntries describe(const AlgorithmConfig& cfg);

struct TraceOutput {
    RunRecord record;
    std::vector<ProfilePoint> profile;
};

/// Runs one configuration and writes the trace CSV (and, if a path is given,
/// the rate-profile CSV), each with the standard header.
TraceOutput run_trace(const AlgorithmConfig& cfg, const std::string& trace_path,
                      const std::string& profile_path = {});

struct RelativeCell {
    std::string variant;
    std::size_t lambda;
    double ratio;  // variant mean / baseline mean
};

struct RelativeTable {
    std::vector<RelativeCell> cells;
    std::vector<std::string> missing;  // "variant@lambda" without a baseline cell
};

/// Ratio of each cell's mean to the baseline mean at the same lambda. Throws
/// std::invalid_argument if no lambda is shared.
RelativeTable relative_runtime(const std::vector<TrialSummary>& table,
                               const std::vector<TrialSummary>& baseline);

/// Mean generations for n=10000, lambda=500, F=1.2 over
/// {biased, random} x {r_init = F, r_init = r_max}.
struct InitialRateTable {
    static constexpr std::size_t n = 10000;
    static constexpr std::size_t lambda = 500;
    static constexpr double F = 1.2;

    // mean[tie][rinit]; tie 0 = biased, 1 = random; rinit 0 = r_min, 1 = r_max
    std::array<std::array<double, 2>, 2> mean{};
    SweepResult result;
};

SweepSpec table1_spec(std::size_t repetitions = 100, std::uint64_t base_seed = 2019);
InitialRateTable compare_table1(std::size_t repetitions = 100, std::uint64_t base_seed = 2019,
                      unsigned threads = 0);

}  // namespace adaptea::experiments
