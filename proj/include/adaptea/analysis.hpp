#pragma once

// Exact fitness-jump distributions of standard bit mutation on OneMax and
// Monte-Carlo estimators for one-generation quantities of the (1,lambda) EA:
// rate-increase probability, fitness drift, potential drift, occupancy of
// birth-death chains. Estimators report against the corresponding analytic
// bounds (see DriftReport).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptea/algorithms.hpp"
#include "adaptea/core.hpp"

namespace adaptea::analysis {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;
/// Slack factor applied to bounds carrying unstated constants.
inline constexpr double kBoundSlack = 10.0;

/// Distribution of the fitness improvement delta = k - k' of one standard bit
/// mutation from fitness distance k; delta ranges over [-(n-k), k].
struct JumpDistribution {
    std::size_t n = 0;
    std::size_t k = 0;
    double r = 0.0;
    std::vector<double> probs;  // probs[delta + (n - k)]

    long long min_delta() const noexcept { return -static_cast<long long>(n - k); }
    long long max_delta() const noexcept { return static_cast<long long>(k); }
    double at(long long delta) const noexcept;
    double total() const;
};

/// Sums P(good flips g, bad flips b) = C(k,g) C(n-k,b) p^(g+b) (1-p)^(n-g-b)
/// over g - b = delta, with binomial terms in log space and pairwise summation.
JumpDistribution exact_jump_distribution(std::size_t n, std::size_t k, double r);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs);

struct LocalProbabilities {
    double p_minus;  // offspring strictly better
    double p_zero;   // offspring equally good
    double p_prime;  // none of the n-k correct bits flipped: (1-r/n)^(n-k)
};

LocalProbabilities local_probabilities(std::size_t n, std::size_t k, double r);

/// L(k) = 1 / (F ln(e n / k)), defined for 0 < k < n/2.
double lower_threshold(std::size_t n, double F, double k);
/// U(k) = n (2n - k) / (22 (n - 2k)^2), defined for 0 < k < n/2.
double upper_threshold(std::size_t n, double k);
/// r_l(k): L(k) ln(lambda) / 2 for n/ln(lambda) <= k < n/2, F for n/lambda < k < n/ln(lambda).
double rate_lower(std::size_t n, std::size_t lambda, double F, double k);
/// r_u(k): n^2 ln(lambda) / (12 (n-2k)^2) for 7n/20 <= k < n/2,
/// 10 U(k) ln(lambda) / 9 for n/ln(lambda) < k < 7n/20.
double rate_upper(std::size_t n, std::size_t lambda, double k);

struct RateThresholds {
    double k;
    std::optional<double> L, U, r_l, r_u;  // empty outside their domains
};

RateThresholds rate_thresholds(std::size_t n, std::size_t lambda, double F, double k);

enum class BoundKind { none, upper, lower };
enum class Verdict { pass, flag, no_bound };

std::string_view to_string(Verdict v) noexcept;

/// Monte-Carlo estimate paired with the analytic bound it is checked against.
/// An upper bound b is flagged when the estimate exceeds 10*b (for b > 0)
/// by more than the half-width; lower bounds symmetrically.
struct DriftReport {
    std::string scenario;
    std::string params;  // "key=value;key=value"
    double estimate = 0.0;
    double half_width = 0.0;  // 99% normal-approximation
    std::size_t samples = 0;
    BoundKind kind = BoundKind::none;
    double bound = 0.0;
    std::string bound_source;
    Verdict verdict = Verdict::no_bound;

    double lower() const noexcept { return estimate - half_width; }
    double upper() const noexcept { return estimate + half_width; }
};

/// Fills verdict from estimate, half_width, kind and bound.
void judge(DriftReport& report);

/// Landscape used to score offspring. `constant` assigns every offspring the
/// parent's distance and exists as a test hook.
enum class Landscape { onemax, constant };

/// Probability that one generation from (k, r) selects an offspring created
/// with rate F r. Under prefer-low-rate this is the event that every
/// fitness-best offspring used F r.
DriftReport estimate_rate_increase_prob(std::size_t n, std::size_t k, double r, double F,
                                        std::size_t lambda, TieBreak tie, std::size_t trials,
                                        Rng& rng, Landscape landscape = Landscape::onemax);

/// Upper bounds on the q_i := prod_{j<i} p_j / (1 - p_j), i = 1..m+1, for a
/// birth-death chain with up-probabilities p_1..p_m. Throws
/// OccupancyPreconditionError unless p_i in [0,1) and p_{i-1} >= p_i/(1-p_i).
/// (p_i = 0 is admitted: exp(-9 F^i) underflows for large F.)
std::vector<double> chain_occupancy(std::span<const double> p);

/// The same products without the precondition check.
std::vector<double> occupancy_products(std::span<const double> p);

class OccupancyPreconditionError : public std::invalid_argument {
public:
    OccupancyPreconditionError(std::size_t index, const std::string& what)
        : std::invalid_argument(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }  // 1-based state index

private:
    std::size_t index_;
};

struct RateOccupancy {
    std::vector<double> fraction;  // fraction[i-1]: share of counted generations at rate F^i
    std::vector<double> bound;     // bound[i-1]: exp(-8 F^(i-1)) for i >= 2, 1 for i = 1
    std::size_t generations = 0;   // generations counted over all trials
};

/// Runs the self-adaptive EA (binomial OneMax model) from (k0, F) and records
/// the rate exponent of every generation whose parent distance is at most
/// 3n/lambda; a trial stops at the optimum or when the distance leaves that region.
RateOccupancy rate_occupancy_near(std::size_t n, std::size_t lambda, double F, std::size_t k0,
                                  std::size_t generations, std::size_t trials, Rng& rng);

/// Runs `trials` chains on states 1..m (m = p.size()) for `steps` steps from
/// state 1 and returns the fraction of time (t = 0..steps) spent in each state.
/// From state i the chain moves up with probability p_i and down otherwise;
/// state 1 stays instead of moving down and state m stays instead of moving up.
std::vector<double> simulate_birth_death(std::span<const double> p, std::size_t steps,
                                         std::size_t trials, Rng& rng);

/// E[k_t - k_{t+1}] for one generation of the given variant from (k, r).
DriftReport average_fitness_drift(std::size_t n, std::size_t k, double r, double F,
                                  std::size_t lambda, Variant variant, std::size_t trials,
                                  Rng& rng);

/// g(k, r) = k + gamma (r - F) with gamma = 2F.
double potential(double k, double r, double F) noexcept;

/// E[g(k,r) - g(k',r')] for one self-adaptive generation from (k, F^exponent),
/// compared against g(k,r) lambda / (10 n) with the usual slack. Requires k <= 3n/lambda and the
/// exponent on the ladder for (F, n).
DriftReport potential_drift_estimate(std::size_t n, std::size_t lambda, double F, std::size_t k,
                                     int rate_exponent, std::size_t trials, Rng& rng);

struct TailCheck {
    double threshold;  // (n - 2k) r / n + Delta
    double exact;      // P(Z >= threshold), Z = fitness-distance increase
    double bound;      // exp(-Delta^2 / (2 (1-p) (r + Delta/3)))
    bool holds() const noexcept { return exact <= bound; }
};

/// Requires r <= n/2 and Delta >= 0.
TailCheck tail_bound_check(std::size_t n, std::size_t k, double r, double delta);

struct TailCase {
    std::size_t n;
    std::size_t k;
    double r;
    double delta;
};

/// Every (n, k, r, Delta) with n in [2..12], k in [0..n], r in {1,2,3} (r <= n/2),
/// Delta in {0, 0.5, 1, 2, 3, 4}, followed by larger cases up to n = 1000.
std::vector<TailCase> default_tail_grid();

/// Columns scenario,params,estimate,half_width,bound,status.
void write_reports_csv(std::ostream& out, std::span<const DriftReport> reports);

}  // namespace adaptea::analysis
