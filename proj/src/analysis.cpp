#include "adaptea/analysis.hpp"

#include "adaptea/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace adaptea::analysis {

namespace {

void check_rate(std::size_t n, double r) {
    if (!(r >= 0.0) || r > static_cast<double>(n))
        throw std::invalid_argument("rate must lie in [0, n]");
}

/// Binomial(m, p) pmf via log-gamma in extended precision; exact endpoints for p in {0, 1}.
std::vector<double> binomial_pmf(std::size_t m, double p) {
    std::vector<double> pmf(m + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[m] = 1.0;
        return pmf;
    }
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(-static_cast<long double>(p));
    const long double lm = std::lgamma(static_cast<long double>(m) + 1.0L);
    for (std::size_t j = 0; j <= m; ++j) {
        const long double jj = static_cast<long double>(j);
        const long double mj = static_cast<long double>(m - j);
        const long double lc = lm - std::lgamma(jj + 1.0L) - std::lgamma(mj + 1.0L);
        pmf[j] = static_cast<double>(std::exp(lc + jj * lp + mj * lq));
    }
    return pmf;
}

struct Accumulator {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double half_width() const {
        return count > 0 ? kZ99 * std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

std::string format_params(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) os << ';';
        first = false;
        os << k << '=' << v;
    }
    return os.str();
}

/// One generation on the exact binomial model of OneMax offspring.
class GenerationSampler {
public:
    GenerationSampler(std::size_t n, std::size_t k, double low_rate, double high_rate,
                      Landscape landscape)
        : k_(k), landscape_(landscape),
          good_low_(k, low_rate / static_cast<double>(n)),
          bad_low_(n - k, low_rate / static_cast<double>(n)),
          good_high_(k, high_rate / static_cast<double>(n)),
          bad_high_(n - k, high_rate / static_cast<double>(n)) {
        check_rate(n, low_rate);
        check_rate(n, high_rate);
    }

    /// `two_rates` selects the self-adaptive coin; otherwise every offspring uses the low rate.
    Candidate sample(std::size_t lambda, bool two_rates, TieBreak tie, Rng& rng) {
        BestTracker tracker(tie);
        std::bernoulli_distribution coin(0.5);
        for (std::size_t j = 0; j < lambda; ++j) {
            const bool low = two_rates ? coin(rng) : true;
            std::size_t d = k_;
            if (landscape_ == Landscape::onemax) {
                const auto g = low ? good_low_(rng) : good_high_(rng);
                const auto b = low ? bad_low_(rng) : bad_high_(rng);
                d = k_ - g + b;
            }
            tracker.offer({d, two_rates && low}, rng);
        }
        return tracker.best();
    }

private:
    std::size_t k_;
    Landscape landscape_;
    std::binomial_distribution<std::size_t> good_low_, bad_low_, good_high_, bad_high_;
};

}  // namespace

double JumpDistribution::at(long long delta) const noexcept {
    if (delta < min_delta() || delta > max_delta()) return 0.0;
    return probs[static_cast<std::size_t>(delta - min_delta())];
}

double JumpDistribution::total() const { return pairwise_sum(probs); }

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

JumpDistribution exact_jump_distribution(std::size_t n, std::size_t k, double r) {
    if (n == 0 || k > n) throw std::invalid_argument("exact_jump_distribution: need 0 <= k <= n, n > 0");
    check_rate(n, r);
    const double p = r / static_cast<double>(n);
    const auto good = binomial_pmf(k, p);
    const auto bad = binomial_pmf(n - k, p);

    JumpDistribution dist{n, k, r, std::vector<double>(n + 1, 0.0)};
    std::vector<double> terms;
    terms.reserve(std::min(k, n - k) + 1);
    for (long long delta = dist.min_delta(); delta <= dist.max_delta(); ++delta) {
        terms.clear();
        // g - b = delta with 0 <= g <= k, 0 <= b <= n-k
        const long long g_lo = std::max(0LL, delta);
        const long long g_hi = std::min<long long>(static_cast<long long>(k),
                                                   delta + static_cast<long long>(n - k));
        for (long long g = g_lo; g <= g_hi; ++g) {
            const double t = good[static_cast<std::size_t>(g)] * bad[static_cast<std::size_t>(g - delta)];
            if (t != 0.0) terms.push_back(t);
        }
        dist.probs[static_cast<std::size_t>(delta - dist.min_delta())] = pairwise_sum(terms);
    }
    return dist;
}

LocalProbabilities local_probabilities(std::size_t n, std::size_t k, double r) {
    if (k == 0 || k > n) throw std::invalid_argument("local_probabilities: need 1 <= k <= n");
    if (!(r > 0.0)) throw std::invalid_argument("local_probabilities: need r > 0");
    const auto dist = exact_jump_distribution(n, k, r);
    const auto first_positive = dist.probs.begin() + static_cast<std::ptrdiff_t>(n - k + 1);
    const std::vector<double> better(first_positive, dist.probs.end());
    const double p = r / static_cast<double>(n);
    return {pairwise_sum(better), dist.at(0),
            std::pow(1.0 - p, static_cast<double>(n - k))};
}

double lower_threshold(std::size_t n, double F, double k) {
    const double nn = static_cast<double>(n);
    if (!(k > 0.0 && k < nn / 2.0)) throw std::domain_error("L(k) requires 0 < k < n/2");
    return 1.0 / (F * std::log(std::numbers::e * nn / k));
}

double upper_threshold(std::size_t n, double k) {
    const double nn = static_cast<double>(n);
    if (!(k > 0.0 && k < nn / 2.0)) throw std::domain_error("U(k) requires 0 < k < n/2");
    const double gap = nn - 2.0 * k;
    return nn * (2.0 * nn - k) / (22.0 * gap * gap);
}

double rate_lower(std::size_t n, std::size_t lambda, double F, double k) {
    const double nn = static_cast<double>(n);
    const double ll = std::log(static_cast<double>(lambda));
    if (!(k > nn / static_cast<double>(lambda) && k < nn / 2.0))
        throw std::domain_error("r_l(k) requires n/lambda < k < n/2");
    if (k >= nn / ll) return lower_threshold(n, F, k) * ll / 2.0;
    return F;
}

double rate_upper(std::size_t n, std::size_t lambda, double k) {
    const double nn = static_cast<double>(n);
    const double ll = std::log(static_cast<double>(lambda));
    if (!(k > nn / ll && k < nn / 2.0)) throw std::domain_error("r_u(k) requires n/ln(lambda) < k < n/2");
    if (k >= 7.0 * nn / 20.0) {
        const double gap = nn - 2.0 * k;
        return nn * nn * ll / (12.0 * gap * gap);
    }
    return 10.0 * upper_threshold(n, k) * ll / 9.0;
}

RateThresholds rate_thresholds(std::size_t n, std::size_t lambda, double F, double k) {
    RateThresholds t{k, {}, {}, {}, {}};
    const auto attempt = [](auto&& f, std::optional<double>& slot) {
        try {
            slot = f();
        } catch (const std::domain_error&) {
        }
    };
    attempt([&] { return lower_threshold(n, F, k); }, t.L);
    attempt([&] { return upper_threshold(n, k); }, t.U);
    attempt([&] { return rate_lower(n, lambda, F, k); }, t.r_l);
    attempt([&] { return rate_upper(n, lambda, k); }, t.r_u);
    return t;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::flag: return "flag";
        case Verdict::no_bound: return "no-bound";
    }
    return "?";
}

void judge(DriftReport& report) {
    const double b = report.bound;
    switch (report.kind) {
        case BoundKind::none:
            report.verdict = Verdict::no_bound;
            return;
        case BoundKind::upper: {
            const double limit = b > 0.0 ? b * kBoundSlack : b / kBoundSlack;
            report.verdict = report.lower() > limit ? Verdict::flag : Verdict::pass;
            return;
        }
        case BoundKind::lower: {
            const double limit = b > 0.0 ? b / kBoundSlack : b * kBoundSlack;
            report.verdict = report.upper() < limit ? Verdict::flag : Verdict::pass;
            return;
        }
    }
}

DriftReport estimate_rate_increase_prob(std::size_t n, std::size_t k, double r, double F,
                                        std::size_t lambda, TieBreak tie, std::size_t trials,
                                        Rng& rng, Landscape landscape) {
    if (k > n) throw std::invalid_argument("rate increase: k > n");
    if (lambda == 0 || trials == 0) throw std::invalid_argument("rate increase: lambda, trials >= 1");
    GenerationSampler sampler(n, k, r / F, F * r, landscape);
    Accumulator acc;
    for (std::size_t t = 0; t < trials; ++t) {
        acc.add(sampler.sample(lambda, true, tie, rng).low_rate ? 0.0 : 1.0);
    }

    DriftReport rep;
    rep.scenario = "rate-increase";
    rep.params = format_params({{"n", double(n)}, {"k", double(k)}, {"r", r}, {"F", F},
                                {"lambda", double(lambda)}});
    rep.estimate = acc.mean;
    rep.half_width = acc.half_width();
    rep.samples = acc.count;

    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double ll = std::log(static_cast<double>(lambda));
    if (landscape == Landscape::onemax && k > 0 && kk <= 3.0 * nn / static_cast<double>(lambda)) {
        rep.kind = BoundKind::upper;
        rep.bound = std::exp(-9.0 * r);
        rep.bound_source = "near region: exp(-9r)";
        if (r < ll) {
            const double first = static_cast<double>(lambda) * kk * F * r / nn * std::exp(-F * r);
            if (first < rep.bound) {
                rep.bound = first;
                rep.bound_source = "near region: lambda k F r / n * exp(-F r)";
            }
        }
    } else if (landscape == Landscape::onemax && k > 0 && kk < nn / 2.0 && lambda > 1) {
        const double u = upper_threshold(n, kk);
        if (r >= u * ll && r <= nn / (2.0 * F)) {
            rep.kind = BoundKind::upper;
            rep.bound = std::pow(static_cast<double>(lambda), 1.0 - (23.0 / 22.0) * r / (u * ll));
            rep.bound_source = "far region: lambda^(1 - (23/22) r / (U(k) ln lambda))";
        }
    }
    judge(rep);
    return rep;
}

std::vector<double> occupancy_products(std::span<const double> p) {
    std::vector<double> q(p.size() + 1, 1.0);
    for (std::size_t i = 1; i <= p.size(); ++i) q[i] = q[i - 1] * p[i - 1] / (1.0 - p[i - 1]);
    return q;
}

std::vector<double> chain_occupancy(std::span<const double> p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] < 1.0))
            throw OccupancyPreconditionError(i + 1, "chain_occupancy: p_" + std::to_string(i + 1) +
                                                        " outside [0,1)");
    }
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i - 1] < p[i] / (1.0 - p[i]))
            throw OccupancyPreconditionError(
                i + 1, "chain_occupancy: p_" + std::to_string(i) + " < p_" + std::to_string(i + 1) +
                           " / (1 - p_" + std::to_string(i + 1) + ")");
    }
    return occupancy_products(p);
}

std::vector<double> simulate_birth_death(std::span<const double> p, std::size_t steps,
                                         std::size_t trials, Rng& rng) {
    const std::size_t m = p.size();
    if (m == 0) throw std::invalid_argument("simulate_birth_death: empty chain");
    std::vector<std::uint64_t> visits(m, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::size_t state = 0;  // 0-based
        ++visits[state];
        for (std::size_t s = 0; s < steps; ++s) {
            if (u(rng) < p[state]) {
                if (state + 1 < m) ++state;
            } else if (state > 0) {
                --state;
            }
            ++visits[state];
        }
    }
    std::vector<double> occ(m);
    const double total = static_cast<double>(trials) * static_cast<double>(steps + 1);
    for (std::size_t i = 0; i < m; ++i) occ[i] = trials ? static_cast<double>(visits[i]) / total : 0.0;
    if (trials == 0) occ[0] = 1.0;
    return occ;
}

RateOccupancy rate_occupancy_near(std::size_t n, std::size_t lambda, double F, std::size_t k0,
                                  std::size_t generations, std::size_t trials, Rng& rng) {
    const RateLadder ladder(F, n);
    const double limit = 3.0 * static_cast<double>(n) / static_cast<double>(lambda);
    if (static_cast<double>(k0) > limit) throw std::invalid_argument("rate occupancy: k0 > 3n/lambda");
    const auto m = static_cast<std::size_t>(ladder.max_exponent());
    std::vector<std::uint64_t> visits(m, 0);
    RateOccupancy occ;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::size_t k = k0;
        int i = 1;
        for (std::size_t g = 0; g < generations && k > 0 && static_cast<double>(k) <= limit; ++g) {
            ++visits[static_cast<std::size_t>(i - 1)];
            ++occ.generations;
            GenerationSampler sampler(n, k, ladder.rate(i - 1), ladder.rate(i + 1), Landscape::onemax);
            const auto best = sampler.sample(lambda, true, TieBreak::prefer_low_rate, rng);
            k = best.distance;
            i = ladder.clamp(best.low_rate ? i - 1 : i + 1);
        }
    }
    occ.fraction.resize(m, 0.0);
    occ.bound.resize(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (occ.generations) occ.fraction[j] = static_cast<double>(visits[j]) / static_cast<double>(occ.generations);
        if (j >= 1) occ.bound[j] = std::exp(-8.0 * ladder.rate(static_cast<int>(j)));
    }
    return occ;
}

DriftReport average_fitness_drift(std::size_t n, std::size_t k, double r, double F,
                                  std::size_t lambda, Variant variant, std::size_t trials,
                                  Rng& rng) {
    if (k > n) throw std::invalid_argument("fitness drift: k > n");
    if (lambda == 0 || trials == 0) throw std::invalid_argument("fitness drift: lambda, trials >= 1");
    double low = r / F;
    double high = F * r;
    bool two_rates = true;
    if (variant == Variant::static_rate) {
        low = high = 1.0;
        two_rates = false;
    } else if (variant == Variant::fitness_dependent) {
        low = high = k == 0 ? 1.0
                            : std::min(static_cast<double>(n) * fitness_dependent_rate(k, n, lambda),
                                       static_cast<double>(n));
        two_rates = false;
    }
    GenerationSampler sampler(n, k, low, high, Landscape::onemax);
    const TieBreak tie = two_rates ? TieBreak::prefer_low_rate : TieBreak::random;
    Accumulator acc;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto best = sampler.sample(lambda, two_rates, tie, rng);
        acc.add(static_cast<double>(k) - static_cast<double>(best.distance));
    }

    DriftReport rep;
    rep.scenario = "fitness-drift";
    rep.params = format_params({{"n", double(n)}, {"k", double(k)}, {"r", r}, {"F", F},
                                {"lambda", double(lambda)}});
    rep.params += ";variant=" + std::string(to_string(variant));
    rep.estimate = acc.mean;
    rep.half_width = acc.half_width();
    rep.samples = acc.count;

    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double ll = std::log(static_cast<double>(lambda));
    if (variant == Variant::self_adaptive && lambda > 1 && kk > nn / static_cast<double>(lambda) &&
        kk < nn / 2.0 && kk > nn / ll) {
        const double ru = rate_upper(n, lambda, kk);
        rep.kind = BoundKind::lower;
        if (r >= F * ru) {
            rep.bound = -(nn - 2.0 * kk) / nn * r / F;
            rep.bound_source = "too-high rate: -((n-2k)/n)(r/F)";
        } else if (kk >= 7.0 * nn / 20.0) {
            rep.bound = 1e-4 * ((nn - 2.0 * kk) / nn * r / F + std::min(ll, r / F));
            rep.bound_source = "k >= 7n/20: 1e-4((n-2k)/n r/F + min(ln lambda, r/F))";
        } else {
            rep.bound = std::min(r / F, ll / (F * std::log(std::numbers::e * nn / kk)));
            rep.bound_source = "n/lambda < k < 7n/20: min(r/F, ln lambda/(F ln(en/k)))";
        }
    }
    judge(rep);
    return rep;
}

double potential(double k, double r, double F) noexcept { return k + 2.0 * F * (r - F); }

DriftReport potential_drift_estimate(std::size_t n, std::size_t lambda, double F, std::size_t k,
                                     int rate_exponent, std::size_t trials, Rng& rng) {
    const RateLadder ladder(F, n);
    if (!ladder.contains(rate_exponent))
        throw std::invalid_argument("potential drift: rate F^" + std::to_string(rate_exponent) +
                                    " not on the ladder (i_max = " +
                                    std::to_string(ladder.max_exponent()) + ")");
    if (lambda == 0 || trials == 0) throw std::invalid_argument("potential drift: lambda, trials >= 1");
    const double nn = static_cast<double>(n);
    if (static_cast<double>(k) > 3.0 * nn / static_cast<double>(lambda))
        throw std::invalid_argument("potential drift: requires k <= 3n/lambda");

    const double r = ladder.rate(rate_exponent);
    GenerationSampler sampler(n, k, ladder.rate(rate_exponent - 1), ladder.rate(rate_exponent + 1),
                              Landscape::onemax);
    const double g = potential(static_cast<double>(k), r, F);
    Accumulator acc;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto best = sampler.sample(lambda, true, TieBreak::prefer_low_rate, rng);
        const int next = ladder.clamp(best.low_rate ? rate_exponent - 1 : rate_exponent + 1);
        acc.add(g - potential(static_cast<double>(best.distance), ladder.rate(next), F));
    }

    DriftReport rep;
    rep.scenario = "potential-drift";
    rep.params = format_params({{"n", nn}, {"k", double(k)}, {"r", r}, {"F", F},
                                {"lambda", double(lambda)}});
    rep.estimate = acc.mean;
    rep.half_width = acc.half_width();
    rep.samples = acc.count;
    rep.kind = BoundKind::lower;
    rep.bound = g * static_cast<double>(lambda) / (10.0 * nn);
    rep.bound_source = "g(k,r) lambda / (10 n)";
    judge(rep);
    return rep;
}

TailCheck tail_bound_check(std::size_t n, std::size_t k, double r, double delta) {
    if (k > n) throw std::invalid_argument("tail_bound_check: k > n");
    if (!(r >= 0.0) || r > static_cast<double>(n) / 2.0)
        throw std::invalid_argument("tail_bound_check: requires 0 <= r <= n/2");
    if (!(delta >= 0.0)) throw std::invalid_argument("tail_bound_check: requires Delta >= 0");
    const double nn = static_cast<double>(n);
    const double p = r / nn;
    const double threshold = (nn - 2.0 * static_cast<double>(k)) * r / nn + delta;
    const auto dist = exact_jump_distribution(n, k, r);
    // Z = -delta_improvement; collect P(Z >= threshold).
    std::vector<double> terms;
    for (long long d = dist.min_delta(); d <= dist.max_delta(); ++d) {
        if (static_cast<double>(-d) >= threshold - 1e-9) terms.push_back(dist.at(d));
    }
    const double bound =
        delta == 0.0 ? 1.0 : std::exp(-delta * delta / (2.0 * (1.0 - p) * (r + delta / 3.0)));
    return {threshold, std::min(1.0, pairwise_sum(terms)), bound};
}

std::vector<TailCase> default_tail_grid() {
    std::vector<TailCase> grid;
    for (std::size_t n = 2; n <= 12; ++n)
        for (std::size_t k = 0; k <= n; ++k)
            for (double r : {1.0, 2.0, 3.0}) {
                if (r > static_cast<double>(n) / 2.0) continue;
                for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}) grid.push_back({n, k, r, delta});
            }
    const TailCase larger[] = {{100, 40, 10, 15}, {100, 40, 10, 5},  {100, 10, 2, 3},
                               {100, 50, 50, 10}, {200, 20, 5, 8},   {500, 100, 30, 12},
                               {1000, 300, 50, 40}, {1000, 5, 1, 4}, {1000, 499, 500, 30}};
    grid.insert(grid.end(), std::begin(larger), std::end(larger));
    return grid;
}

void write_reports_csv(std::ostream& out, std::span<const DriftReport> reports) {
    io::write_row(out, {"scenario", "params", "estimate", "half_width", "bound", "status"});
    for (const auto& r : reports) {
        io::write_row(out, {r.scenario, r.params, io::format_double(r.estimate),
                            io::format_double(r.half_width),
                            r.kind == BoundKind::none ? "-" : io::format_double(r.bound),
                            std::string(to_string(r.verdict))});
    }
}

}  // namespace adaptea::analysis
