#include "adaptea/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "adaptea/algorithms.hpp"
#include "adaptea/analysis.hpp"
#include "adaptea/experiments.hpp"
#include "adaptea/io.hpp"
#include "adaptea/plot.hpp"

namespace adaptea::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view s, std::string_view seps) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string_view::npos) {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

/// "100,200,300" or "100:1000:100" (inclusive range), or a mix separated by ',' / ';'.
std::vector<std::size_t> parse_lambdas(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split(text, ",;")) {
        const auto range = split(item, ":");
        if (range.size() == 1) {
            out.push_back(io::parse_u64(range[0]));
        } else if (range.size() == 3) {
            const auto lo = io::parse_u64(range[0]), hi = io::parse_u64(range[1]),
                       step = io::parse_u64(range[2]);
            if (step == 0 || lo > hi) throw UsageError("bad lambda range '" + item + "'");
            for (auto l = lo; l <= hi; l += step) out.push_back(l);
        } else {
            throw UsageError("bad lambda list entry '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty lambda list");
    return out;
}

/// Value of --config/--spec in `args`, or empty.
std::string config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        for (std::string_view flag : {"--config", "--spec"}) {
            const std::string& a = args[i];
            if (a == flag && i + 1 < args.size()) return args[i + 1];
            if (a.size() > flag.size() && a.starts_with(flag) && a[flag.size()] == '=')
                return a.substr(flag.size() + 1);
        }
    }
    return {};
}

/// Appends `--key=value` for every config-file entry whose flag was not given
/// on the command line, so that flags win over the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    const auto path = config_path(args);
    if (path.empty()) return args;
    std::set<std::string> explicit_keys;
    for (const auto& a : args) {
        if (!a.starts_with("--")) continue;
        explicit_keys.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                           : a.find('=') - 2));
    }
    for (const auto& [key, value] : io::read_flat_config(path)) {
        if (key == "config" || key == "spec") throw UsageError("config file may not set '" + key + "'");
        if (!explicit_keys.count(key)) args.push_back("--" + key + "=" + value);
    }
    return args;
}

void open_output(std::ofstream& f, const std::string& path) {
    f.open(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
}

/// Writes to `path`, or to `fallback` when the path is empty.
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream f;
    open_output(f, path);
    fn(f);
}

std::string params(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += (s.empty() ? "" : ";") + std::string(k) + "=" + v;
    return s;
}

std::string num(double v) { return io::format_double(v); }

// --- run -----------------------------------------------------------------

struct RunOptions {
    std::string algo = "self-adaptive";
    std::size_t n = 100;
    std::size_t lambda = 12;
    double F = 1.2;
    std::string tie = "biased";
    std::string rinit = "min";
    std::uint64_t seed = 0;
    std::uint64_t max_generations = 0;
    std::string trace, profile, config;
};

int do_run(const RunOptions& o, std::ostream& out) {
    AlgorithmConfig cfg;
    cfg.variant = parse_variant(o.algo);
    cfg.n = o.n;
    cfg.lambda = o.lambda;
    cfg.F = o.F;
    cfg.tie_break = parse_tie_break(o.tie);
    cfg.seed = o.seed;
    cfg.max_generations = o.max_generations;
    if (cfg.variant == Variant::self_adaptive) {
        if (o.rinit == "min") {
            cfg.r_init_exponent = 1;
        } else if (o.rinit == "max") {
            cfg.r_init_exponent = RateLadder(cfg.F, cfg.n).max_exponent();
        } else {
            cfg.r_init_exponent = static_cast<int>(io::parse_u64(o.rinit));
        }
    }
    validate(cfg);
    const RunRecord rec = o.trace.empty()
                              ? run(cfg)
                              : experiments::run_trace(cfg, o.trace, o.profile).record;
    if (o.trace.empty() && !o.profile.empty()) {
        std::ofstream f;
        open_output(f, o.profile);
        io::write_header(f, "run", experiments::describe(rec.config), cfg.seed);
        experiments::write_profile_csv(f, experiments::rate_profile(rec));
    }
    out << "generations=" << rec.generations << " found=" << (rec.found() ? 1 : 0)
        << " evaluations=" << rec.evaluations << '\n';
    return kExitOk;
}

// --- sweep ---------------------------------------------------------------

struct SweepOptions {
    std::size_t n = 100000;
    std::string lambdas = "100:1000:100";
    std::string variants =
        "static;fitness-dependent;self-adaptive:F=1.2;self-adaptive:F=2;self-adaptive:F=32";
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    std::uint64_t max_generations = 0;
    unsigned threads = 0;
    bool fast = false;
    std::string out, summary, config;
};

int do_sweep(const SweepOptions& o, bool n_given, bool reps_given, std::ostream& out) {
    experiments::SweepSpec spec;
    spec.n = o.fast && !n_given ? 10000 : o.n;
    spec.repetitions = o.fast && !reps_given ? 30 : o.reps;
    spec.lambdas = parse_lambdas(o.lambdas);
    for (const auto& v : split(o.variants, ";")) spec.variants.push_back(experiments::parse_variant_spec(v));
    spec.base_seed = o.seed;
    spec.max_generations = o.max_generations;
    experiments::validate(spec);

    const auto result = experiments::run_sweep(spec, o.threads);
    const auto config = experiments::describe(spec);
    {
        std::ofstream f;
        open_output(f, o.out);
        io::write_header(f, "sweep", config, spec.base_seed);
        experiments::write_results_csv(f, result.rows);
    }
    if (!o.summary.empty()) {
        std::ofstream f;
        open_output(f, o.summary);
        io::write_header(f, "sweep", config, spec.base_seed);
        experiments::write_summary_csv(f, result.summary);
    }
    for (const auto& s : result.summary) {
        out << s.variant << " lambda=" << s.lambda << " mean=" << num(s.mean);
        if (s.capped()) out << " capped=" << (s.reps - s.found);
        out << '\n';
    }
    return kExitOk;
}

// --- table1 --------------------------------------------------------------

struct TableOptions {
    std::size_t reps = 100;
    std::uint64_t seed = 2019;
    unsigned threads = 0;
    std::string out, results, config;
};

int do_table1(const TableOptions& o, std::ostream& out) {
    const auto spec = experiments::table1_spec(o.reps, o.seed);
    const auto table = experiments::compare_table1(o.reps, o.seed, o.threads);
    auto config = experiments::describe(spec);
    config.emplace_back("F", num(experiments::InitialRateTable::F));
    with_output(o.out, out, [&](std::ostream& f) {
        io::write_header(f, "table1", config, o.seed);
        io::write_row(f, {"tie", "rinit", "mean", "std", "min", "max", "reps", "found"});
        for (const auto& v : spec.variants) {
            const auto* s = table.result.find(v.label, experiments::InitialRateTable::lambda);
            io::write_row(f, {std::string(to_string(v.tie)), v.rinit == experiments::InitialRate::min ? "min" : "max",
                              num(s->mean), num(s->std), std::to_string(s->min), std::to_string(s->max),
                              std::to_string(s->reps), std::to_string(s->found)});
        }
    });
    if (!o.results.empty()) {
        std::ofstream f;
        open_output(f, o.results);
        io::write_header(f, "table1", config, o.seed);
        experiments::write_results_csv(f, table.result.rows);
    }
    return kExitOk;
}

// --- verify --------------------------------------------------------------

struct VerifyOptions {
    std::size_t n = 10000;
    std::size_t lambda = 200;
    double F = 2.0;
    std::size_t k = 50;
    double r = 0.0;  // 0: F
    double delta = -1.0;
    std::string tie = "biased";
    std::string algo = "self-adaptive";
    std::size_t trials = 10000;
    std::size_t states = 5;
    std::size_t steps = 10000;
    std::size_t generations = 1000;
    std::uint64_t seed = 1;
    std::string out, config;
};

std::vector<analysis::DriftReport> verify_occupancy(const VerifyOptions& o, Rng& rng) {
    std::vector<double> p;
    for (std::size_t j = 1; j <= o.states; ++j) p.push_back(std::exp(-9.0 * std::pow(o.F, double(j))));
    const auto q = analysis::chain_occupancy(p);
    const auto empirical = analysis::simulate_birth_death(p, o.steps, o.trials, rng);
    std::vector<analysis::DriftReport> reports;
    for (std::size_t i = 0; i < o.states; ++i) {
        analysis::DriftReport r;
        r.scenario = "occupancy";
        r.params = params({{"F", num(o.F)}, {"state", std::to_string(i + 1)},
                           {"steps", std::to_string(o.steps)}, {"trials", std::to_string(o.trials)}});
        r.estimate = empirical[i];
        r.samples = o.trials;
        r.kind = analysis::BoundKind::upper;
        r.bound = q[i];
        r.half_width = 3.0 * std::sqrt(q[i] * (1.0 - q[i]) / double(o.trials));
        r.bound_source = "chain occupancy product";
        r.verdict = r.estimate <= r.bound + r.half_width ? analysis::Verdict::pass : analysis::Verdict::flag;
        reports.push_back(std::move(r));
    }
    return reports;
}

std::vector<analysis::DriftReport> verify_rate_occupancy(const VerifyOptions& o, Rng& rng) {
    const auto occ = analysis::rate_occupancy_near(o.n, o.lambda, o.F, o.k, o.generations, o.trials, rng);
    std::vector<analysis::DriftReport> reports;
    for (std::size_t i = 0; i < occ.fraction.size(); ++i) {
        analysis::DriftReport r;
        r.scenario = "rate-occupancy";
        r.params = params({{"n", std::to_string(o.n)}, {"lambda", std::to_string(o.lambda)},
                           {"F", num(o.F)}, {"k0", std::to_string(o.k)}, {"exponent", std::to_string(i + 1)}});
        const double f = occ.fraction[i];
        const double g = std::max<double>(1.0, double(occ.generations));
        r.estimate = f;
        r.samples = occ.generations;
        r.half_width = analysis::kZ99 * std::sqrt(f * (1.0 - f) / g);
        r.kind = analysis::BoundKind::upper;
        r.bound = occ.bound[i];
        r.bound_source = "exp(-8 F^(i-1))";
        analysis::judge(r);
        reports.push_back(std::move(r));
    }
    return reports;
}

std::vector<analysis::DriftReport> verify_tail(const VerifyOptions& o, bool single) {
    std::vector<analysis::TailCase> cases;
    if (single) cases.push_back({o.n, o.k, o.r > 0 ? o.r : o.F, std::max(0.0, o.delta)});
    else cases = analysis::default_tail_grid();
    std::vector<analysis::DriftReport> reports;
    for (const auto& c : cases) {
        const auto t = analysis::tail_bound_check(c.n, c.k, c.r, c.delta);
        analysis::DriftReport r;
        r.scenario = "tail";
        r.params = params({{"n", std::to_string(c.n)}, {"k", std::to_string(c.k)}, {"r", num(c.r)},
                           {"delta", num(c.delta)}});
        r.estimate = t.exact;
        r.kind = analysis::BoundKind::upper;
        r.bound = t.bound;
        r.bound_source = "Bernstein";
        r.verdict = t.holds() ? analysis::Verdict::pass : analysis::Verdict::flag;
        reports.push_back(std::move(r));
    }
    return reports;
}

int exponent_of(double r, double F) {
    const int e = static_cast<int>(std::lround(std::log(r) / std::log(F)));
    if (e < 1 || std::abs(std::pow(F, e) - r) > 1e-9 * r)
        throw UsageError("--r must be a power F^i with i >= 1 (got r=" + num(r) + ", F=" + num(F) + ")");
    return e;
}

int do_verify(const std::string& scenario, const VerifyOptions& o, bool single_tail, std::ostream& out) {
    Rng rng(o.seed);
    const double r = o.r > 0 ? o.r : o.F;
    std::vector<analysis::DriftReport> reports;
    if (scenario == "occupancy") {
        reports = verify_occupancy(o, rng);
    } else if (scenario == "rate-occupancy") {
        reports = verify_rate_occupancy(o, rng);
    } else if (scenario == "tail") {
        reports = verify_tail(o, single_tail);
    } else if (scenario == "rate-increase") {
        reports.push_back(analysis::estimate_rate_increase_prob(o.n, o.k, r, o.F, o.lambda,
                                                                parse_tie_break(o.tie), o.trials, rng));
    } else if (scenario == "drift") {
        reports.push_back(analysis::average_fitness_drift(o.n, o.k, r, o.F, o.lambda,
                                                          parse_variant(o.algo), o.trials, rng));
    } else if (scenario == "potential") {
        reports.push_back(analysis::potential_drift_estimate(o.n, o.lambda, o.F, o.k, exponent_of(r, o.F),
                                                             o.trials, rng));
    } else {
        throw UsageError("unknown verify scenario '" + scenario + "'");
    }
    with_output(o.out, out, [&](std::ostream& f) {
        io::ConfigEntries config{{"scenario", scenario}, {"n", std::to_string(o.n)},
                                 {"lambda", std::to_string(o.lambda)}, {"F", num(o.F)},
                                 {"k", std::to_string(o.k)}, {"r", num(r)},
                                 {"tie", o.tie}, {"algo", o.algo},
                                 {"delta", single_tail ? num(o.delta) : "grid"},
                                 {"trials", std::to_string(o.trials)}, {"states", std::to_string(o.states)},
                                 {"steps", std::to_string(o.steps)},
                                 {"generations", std::to_string(o.generations)}};
        io::write_header(f, "verify", config, o.seed);
        analysis::write_reports_csv(f, reports);
    });
    const bool flagged = std::any_of(reports.begin(), reports.end(), [](const auto& rep) {
        return rep.verdict == analysis::Verdict::flag;
    });
    return flagged ? kExitFlagged : kExitOk;
}

// --- plot ----------------------------------------------------------------

struct PlotOptions {
    std::string kind;
    std::vector<std::string> inputs;
    std::string out;
    std::string baseline = "static";
    std::string config;
};

}  // namespace

int cli_run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-adaptive (1,lambda) EA on OneMax: runs, sweeps and verifiers", "adaptea"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::kToolVersion));

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Run one configuration");
    run_cmd->add_option("--algo", ro.algo, "self-adaptive | static | fitness-dependent")->capture_default_str();
    run_cmd->add_option("--n", ro.n, "Problem size")->capture_default_str();
    run_cmd->add_option("--lambda", ro.lambda, "Offspring population size")->capture_default_str();
    run_cmd->add_option("--F", ro.F, "Rate update factor")->capture_default_str();
    run_cmd->add_option("--tie", ro.tie, "biased | random")->capture_default_str();
    run_cmd->add_option("--rinit", ro.rinit, "min | max | ladder exponent")->capture_default_str();
    run_cmd->add_option("--seed", ro.seed)->capture_default_str();
    run_cmd->add_option("--max-generations", ro.max_generations, "0 for the default cap")->capture_default_str();
    run_cmd->add_option("--trace", ro.trace, "Trace CSV (t,k,r)");
    run_cmd->add_option("--profile", ro.profile, "Rate profile CSV (d,r,count)");
    run_cmd->add_option("--config", ro.config, "key=value file; flags win");

    SweepOptions so;
    auto* sweep_cmd = app.add_subcommand("sweep", "Lambda sweep over several variants");
    auto* sweep_n = sweep_cmd->add_option("--n", so.n)->capture_default_str();
    sweep_cmd->add_option("--lambdas", so.lambdas, "e.g. 100,200 or 100:1000:100")->capture_default_str();
    sweep_cmd->add_option("--variants", so.variants, "';'-separated variant specs")->capture_default_str();
    auto* sweep_reps = sweep_cmd->add_option("--reps", so.reps)->capture_default_str();
    sweep_cmd->add_option("--seed", so.seed)->capture_default_str();
    sweep_cmd->add_option("--max-generations", so.max_generations)->capture_default_str();
    sweep_cmd->add_option("--threads", so.threads, "0 for all cores (capped by ADAPTEA_THREADS)");
    sweep_cmd->add_flag("--fast", so.fast, "n=10000 and 30 repetitions unless given");
    sweep_cmd->add_option("--out", so.out, "Results CSV")->required();
    sweep_cmd->add_option("--summary", so.summary, "Summary CSV");
    sweep_cmd->add_option("--spec,--config", so.config, "key=value file; flags win");

    TableOptions to;
    auto* table_cmd = app.add_subcommand("table1", "Initial-rate x tie-breaking runtime table (n=10000, lambda=500, F=1.2)");
    table_cmd->add_option("--reps", to.reps)->capture_default_str();
    table_cmd->add_option("--seed", to.seed)->capture_default_str();
    table_cmd->add_option("--threads", to.threads);
    table_cmd->add_option("--out", to.out, "Table CSV (default stdout)");
    table_cmd->add_option("--results", to.results, "Per-run results CSV");
    table_cmd->add_option("--config", to.config, "key=value file; flags win");

    VerifyOptions vo;
    std::string scenario;
    auto* verify_cmd = app.add_subcommand("verify", "Check Monte-Carlo estimates against analytic bounds");
    verify_cmd->add_option("scenario", scenario,
                           "occupancy | rate-occupancy | tail | rate-increase | drift | potential")
        ->required();
    verify_cmd->add_option("--n", vo.n)->capture_default_str();
    verify_cmd->add_option("--lambda", vo.lambda)->capture_default_str();
    verify_cmd->add_option("--F", vo.F)->capture_default_str();
    verify_cmd->add_option("--k", vo.k, "Fitness distance (k0 for rate-occupancy)")->capture_default_str();
    verify_cmd->add_option("--r", vo.r, "Mutation strength (default F)");
    auto* delta_opt = verify_cmd->add_option("--delta", vo.delta, "Tail deviation; omit for the default grid");
    verify_cmd->add_option("--tie", vo.tie)->capture_default_str();
    verify_cmd->add_option("--algo", vo.algo)->capture_default_str();
    verify_cmd->add_option("--trials", vo.trials)->capture_default_str();
    verify_cmd->add_option("--states", vo.states)->capture_default_str();
    verify_cmd->add_option("--steps", vo.steps)->capture_default_str();
    verify_cmd->add_option("--generations", vo.generations)->capture_default_str();
    verify_cmd->add_option("--seed", vo.seed)->capture_default_str();
    verify_cmd->add_option("--out", vo.out, "Report CSV (default stdout)");
    verify_cmd->add_option("--config", vo.config, "key=value file; flags win");

    PlotOptions po;
    auto* plot_cmd = app.add_subcommand("plot", "Render CSV results as SVG");
    plot_cmd->add_option("--kind", po.kind, "trace | sweep | relative | rate-profile")->required();
    plot_cmd->add_option("--in", po.inputs, "Input CSV (repeatable)")->required();
    plot_cmd->add_option("--out", po.out, "Output SVG")->required();
    plot_cmd->add_option("--baseline", po.baseline, "Baseline variant for relative plots")->capture_default_str();
    plot_cmd->add_option("--config", po.config, "key=value file; flags win");

    try {
        auto args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << io::kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*run_cmd) return do_run(ro, out);
        if (*sweep_cmd) return do_sweep(so, sweep_n->count() > 0, sweep_reps->count() > 0, out);
        if (*table_cmd) return do_table1(to, out);
        if (*verify_cmd) return do_verify(scenario, vo, delta_opt->count() > 0, out);
        if (*plot_cmd) {
            plot::emit_plot(po.inputs, plot::parse_plot_kind(po.kind), po.out, po.baseline);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace adaptea::cli
