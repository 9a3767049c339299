#include "adaptea/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace adaptea::experiments {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view to_string(InitialRate r) { return r == InitialRate::min ? "min" : "max"; }

void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace

VariantSpec parse_variant_spec(std::string_view text) {
    const auto parts = split(text, ':');
    VariantSpec v;
    v.variant = parse_variant(parts.front());
    bool labelled = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("variant option '" + std::string(parts[i]) + "' needs key=value");
        const auto key = parts[i].substr(0, eq);
        const auto val = parts[i].substr(eq + 1);
        if (key == "F") v.F = io::parse_double(val);
        else if (key == "tie") v.tie = parse_tie_break(val);
        else if (key == "rinit") {
            if (val == "min") v.rinit = InitialRate::min;
            else if (val == "max") v.rinit = InitialRate::max;
            else throw std::invalid_argument("rinit must be min or max");
        } else if (key == "label") {
            v.label = std::string(val);
            labelled = true;
        } else {
            throw std::invalid_argument("unknown variant option '" + std::string(key) + "'");
        }
    }
    if (v.variant != Variant::self_adaptive && parts.size() > 1 + (labelled ? 1 : 0))
        throw std::invalid_argument("options F/tie/rinit apply to self-adaptive variants only");
    if (!labelled) v.label = default_label(v);
    return v;
}

std::string default_label(const VariantSpec& v) {
    if (v.variant != Variant::self_adaptive) return std::string(to_string(v.variant));
    std::string s = "sa-F" + io::format_double(v.F);
    if (v.tie == TieBreak::random) s += "-random";
    if (v.rinit == InitialRate::max) s += "-rmax";
    return s;
}

AlgorithmConfig make_config(const VariantSpec& v, std::size_t n, std::size_t lambda,
                            std::uint64_t seed, std::uint64_t max_generations) {
    AlgorithmConfig cfg;
    cfg.n = n;
    cfg.lambda = lambda;
    cfg.variant = v.variant;
    cfg.F = v.F;
    cfg.tie_break = v.tie;
    cfg.seed = seed;
    cfg.max_generations = max_generations;
    if (v.variant == Variant::self_adaptive) {
        cfg.r_init_exponent = v.rinit == InitialRate::min ? 1 : RateLadder(v.F, n).max_exponent();
    }
    return cfg;
}

void validate(const SweepSpec& spec) {
    if (spec.repetitions == 0) throw std::invalid_argument("sweep: repetitions must be >= 1");
    if (spec.lambdas.empty()) throw std::invalid_argument("sweep: no lambda values");
    if (spec.variants.empty()) throw std::invalid_argument("sweep: no variants");
    for (std::size_t i = 0; i < spec.variants.size(); ++i)
        for (std::size_t j = i + 1; j < spec.variants.size(); ++j)
            if (spec.variants[i].label == spec.variants[j].label)
                throw std::invalid_argument("sweep: duplicate variant label '" + spec.variants[i].label + "'");
    for (const auto& v : spec.variants)
        for (auto lambda : spec.lambdas) validate(make_config(v, spec.n, lambda, 0));
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view variant_label, std::size_t lambda,
                          std::size_t rep) noexcept {
    std::uint64_t s = mix64(base);
    s = mix64(s ^ hash_label(variant_label));
    s = mix64(s ^ static_cast<std::uint64_t>(lambda));
    return mix64(s ^ static_cast<std::uint64_t>(rep));
}

std::vector<TrialSummary> summarize(const std::vector<TrialRow>& rows) {
    std::vector<TrialSummary> out;
    std::vector<std::vector<double>> samples;
    std::map<std::pair<std::string, std::size_t>, std::size_t> index;
    for (const auto& row : rows) {
        const auto key = std::make_pair(row.variant, row.lambda);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            TrialSummary s;
            s.variant = row.variant;
            s.lambda = row.lambda;
            s.min = std::numeric_limits<std::uint64_t>::max();
            out.push_back(s);
            samples.emplace_back();
        }
        auto& s = out[it->second];
        samples[it->second].push_back(static_cast<double>(row.generations));
        s.min = std::min(s.min, row.generations);
        s.max = std::max(s.max, row.generations);
        ++s.reps;
        if (row.found) ++s.found;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& xs = samples[i];
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        out[i].mean = mean;
        out[i].std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    }
    return out;
}

const TrialSummary* SweepResult::find(std::string_view variant, std::size_t lambda) const {
    for (const auto& s : summary)
        if (s.variant == variant && s.lambda == lambda) return &s;
    return nullptr;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ADAPTEA_THREADS")) {
        try {
            const auto cap = io::parse_u64(env);
            if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::invalid_argument&) {
        }
    }
    return std::max(1u, n);
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
    validate(spec);
    struct Task {
        const VariantSpec* variant;
        std::size_t lambda;
        std::size_t rep;
    };
    std::vector<Task> tasks;
    for (const auto& v : spec.variants)
        for (auto lambda : spec.lambdas)
            for (std::size_t rep = 0; rep < spec.repetitions; ++rep) tasks.push_back({&v, lambda, rep});

    SweepResult result;
    result.rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            const auto& v = *task.variant;
            const auto seed = derive_seed(spec.base_seed, v.label, task.lambda, task.rep);
            const auto rec = run(make_config(v, spec.n, task.lambda, seed, spec.max_generations));
            const bool sa = v.variant == Variant::self_adaptive;
            result.rows[i] = TrialRow{v.label,
                                      task.lambda,
                                      spec.n,
                                      sa ? io::format_double(v.F) : "-",
                                      sa ? std::string(to_string(v.tie)) : "-",
                                      sa ? std::string(to_string(v.rinit)) : "-",
                                      task.rep,
                                      seed,
                                      rec.generations,
                                      rec.found()};
        }
    };
    const unsigned workers = std::min<std::size_t>(worker_count(threads), tasks.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    result.summary = summarize(result.rows);
    return result;
}

io::ConfigEntries describe(const SweepSpec& spec) {
    std::string lambdas, variants;
    for (auto l : spec.lambdas) lambdas += (lambdas.empty() ? "" : ";") + std::to_string(l);
    for (const auto& v : spec.variants) variants += (variants.empty() ? "" : ";") + v.label;
    return {{"n", std::to_string(spec.n)},
            {"lambdas", lambdas},
            {"variants", variants},
            {"reps", std::to_string(spec.repetitions)},
            {"seed", std::to_string(spec.base_seed)},
            {"max_generations", spec.max_generations ? std::to_string(spec.max_generations) : "default"}};
}

void write_results_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    io::write_row(out, kResultColumns);
    for (const auto& r : rows) {
        io::write_row(out, {r.variant, std::to_string(r.lambda), std::to_string(r.n), r.F, r.tie,
                            r.rinit, std::to_string(r.rep), std::to_string(r.seed),
                            std::to_string(r.generations), r.found ? "1" : "0"});
    }
}

void write_summary_csv(std::ostream& out, const std::vector<TrialSummary>& summary) {
    io::write_row(out, kSummaryColumns);
    for (const auto& s : summary) {
        io::write_row(out, {s.variant, std::to_string(s.lambda), io::format_double(s.mean),
                            io::format_double(s.std), std::to_string(s.min), std::to_string(s.max),
                            std::to_string(s.reps), std::to_string(s.found)});
    }
}

std::vector<TrialRow> parse_results(const io::CsvTable& table) {
    if (table.columns != kResultColumns)
        throw std::runtime_error("results csv: " + io::column_diff(kResultColumns, table.columns));
    std::vector<TrialRow> rows;
    for (const auto& f : table.rows) {
        rows.push_back(TrialRow{f[0], io::parse_u64(f[1]), io::parse_u64(f[2]), f[3], f[4], f[5],
                                io::parse_u64(f[6]), io::parse_u64(f[7]), io::parse_u64(f[8]),
                                f[9] == "1"});
    }
    return rows;
}

std::vector<TrialSummary> parse_summary(const io::CsvTable& table) {
    if (table.columns != kSummaryColumns)
        throw std::runtime_error("summary csv: " + io::column_diff(kSummaryColumns, table.columns));
    std::vector<TrialSummary> out;
    for (const auto& f : table.rows) {
        out.push_back(TrialSummary{f[0], io::parse_u64(f[1]), io::parse_double(f[2]),
                                   io::parse_double(f[3]), io::parse_u64(f[4]), io::parse_u64(f[5]),
                                   io::parse_u64(f[6]), io::parse_u64(f[7])});
    }
    return out;
}

void write_trace_csv(std::ostream& out, const RunRecord& record) {
    io::write_row(out, {"t", "k", "r"});
    for (const auto& e : record.trace)
        io::write_row(out, {std::to_string(e.generation), std::to_string(e.distance),
                            io::format_double(e.rate)});
}

std::vector<ProfilePoint> rate_profile(const RunRecord& record) {
    std::map<std::pair<std::size_t, double>, std::size_t> counts;
    for (const auto& e : record.trace) ++counts[{e.distance, e.rate}];
    std::vector<ProfilePoint> out;
    out.reserve(counts.size());
    for (const auto& [key, c] : counts) out.push_back({key.first, key.second, c});
    return out;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& profile) {
    io::write_row(out, {"d", "r", "count"});
    for (const auto& p : profile)
        io::write_row(out, {std::to_string(p.distance), io::format_double(p.rate), std::to_string(p.count)});
}

std::array<double, 10> mean_log_rate_by_decile(const RunRecord& record, std::size_t d_max) {
    std::array<double, 10> sum{};
    std::array<std::size_t, 10> count{};
    if (d_max == 0) throw std::invalid_argument("d_max must be positive");
    for (const auto& e : record.trace) {
        if (e.distance == 0 || e.distance > d_max) continue;
        const auto bin = std::min<std::size_t>(9, (e.distance - 1) * 10 / d_max);
        sum[bin] += std::log(e.rate);
        ++count[bin];
    }
    std::array<double, 10> out{};
    for (std::size_t i = 0; i < 10; ++i)
        out[i] = count[i] ? sum[i] / static_cast<double>(count[i]) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

io::ConfigEntries describe(const AlgorithmConfig& cfg) {
    io::ConfigEntries e{{"algo", std::string(to_string(cfg.variant))},
                        {"n", std::to_string(cfg.n)},
                        {"lambda", std::to_string(cfg.lambda)}};
    if (cfg.variant == Variant::self_adaptive) {
        e.emplace_back("F", io::format_double(cfg.F));
        e.emplace_back("tie", std::string(to_string(cfg.tie_break)));
        e.emplace_back("rinit_exponent", std::to_string(cfg.r_init_exponent));
    }
    e.emplace_back("max_generations", std::to_string(cfg.max_generations
                                                         ? cfg.max_generations
                                                         : default_max_generations(cfg.n, cfg.lambda)));
    e.emplace_back("seed", std::to_string(cfg.seed));
    return e;
}

TraceOutput run_trace(const AlgorithmConfig& cfg, const std::string& trace_path,
                      const std::string& profile_path) {
    TraceOutput out{run(cfg), {}};
    out.profile = rate_profile(out.record);
    if (!trace_path.empty()) {
        std::ofstream f;
        open_or_throw(f, trace_path);
        io::write_header(f, "run", describe(cfg), cfg.seed);
        write_trace_csv(f, out.record);
    }
    if (!profile_path.empty()) {
        std::ofstream f;
        open_or_throw(f, profile_path);
        io::write_header(f, "run", describe(cfg), cfg.seed);
        write_profile_csv(f, out.profile);
    }
    return out;
}

RelativeTable relative_runtime(const std::vector<TrialSummary>& table,
                               const std::vector<TrialSummary>& baseline) {
    std::map<std::size_t, double> base;
    for (const auto& b : baseline) base[b.lambda] = b.mean;
    RelativeTable out;
    for (const auto& cell : table) {
        const auto it = base.find(cell.lambda);
        if (it == base.end()) {
            out.missing.push_back(cell.variant + "@" + std::to_string(cell.lambda));
            continue;
        }
        out.cells.push_back({cell.variant, cell.lambda, cell.mean / it->second});
    }
    if (out.cells.empty())
        throw std::invalid_argument("relative_runtime: no lambda shared with the baseline");
    return out;
}

SweepSpec table1_spec(std::size_t repetitions, std::uint64_t base_seed) {
    SweepSpec spec;
    spec.n = InitialRateTable::n;
    spec.lambdas = {InitialRateTable::lambda};
    spec.repetitions = repetitions;
    spec.base_seed = base_seed;
    for (auto tie : {TieBreak::prefer_low_rate, TieBreak::random}) {
        for (auto rinit : {InitialRate::min, InitialRate::max}) {
            VariantSpec v;
            v.variant = Variant::self_adaptive;
            v.F = InitialRateTable::F;
            v.tie = tie;
            v.rinit = rinit;
            v.label = default_label(v);
            spec.variants.push_back(v);
        }
    }
    return spec;
}

InitialRateTable compare_table1(std::size_t repetitions, std::uint64_t base_seed, unsigned threads) {
    const auto spec = table1_spec(repetitions, base_seed);
    InitialRateTable t;
    t.result = run_sweep(spec, threads);
    for (std::size_t i = 0; i < spec.variants.size(); ++i) {
        const auto* s = t.result.find(spec.variants[i].label, InitialRateTable::lambda);
        t.mean[i / 2][i % 2] = s->mean;
    }
    return t;
}

}  // namespace adaptea::experiments
