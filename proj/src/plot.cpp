#include "adaptea/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "adaptea/experiments.hpp"

namespace adaptea::plot {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Tick step of the form {1,2,5} * 10^k giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::string tick_label(double v) {
    std::ostringstream os;
    os << std::defaultfloat << std::setprecision(6) << v;
    return os.str();
}

void require_columns(const io::CsvTable& t, const std::vector<std::string>& cols, std::string_view kind) {
    for (const auto& c : cols) {
        if (!t.has_column(c))
            throw std::runtime_error(std::string(kind) + " plot: schema mismatch, " +
                                     io::column_diff(cols, t.columns));
    }
}

std::vector<experiments::TrialSummary> summaries_of(const io::CsvTable& t, std::string_view kind) {
    if (t.columns == experiments::kSummaryColumns) return experiments::parse_summary(t);
    if (t.columns == experiments::kResultColumns) return experiments::summarize(experiments::parse_results(t));
    throw std::runtime_error(std::string(kind) + " plot: schema mismatch, " +
                             io::column_diff(experiments::kSummaryColumns, t.columns));
}

Chart by_variant(const std::vector<experiments::TrialSummary>& cells,
                 const auto& value_of) {
    Chart c;
    std::map<std::string, std::size_t> index;
    for (const auto& s : cells) {
        auto it = index.find(s.variant);
        if (it == index.end()) {
            it = index.emplace(s.variant, c.series.size()).first;
            c.series.push_back({s.variant, {}});
        }
        c.series[it->second].points.emplace_back(static_cast<double>(s.lambda), value_of(s));
    }
    for (auto& s : c.series) std::sort(s.points.begin(), s.points.end());
    return c;
}

}  // namespace

PlotKind parse_plot_kind(std::string_view s) {
    if (s == "trace") return PlotKind::trace;
    if (s == "sweep") return PlotKind::sweep;
    if (s == "relative") return PlotKind::relative;
    if (s == "rate-profile") return PlotKind::rate_profile;
    throw std::invalid_argument("unknown plot kind '" + std::string(s) + "'");
}

Chart chart_from_table(const io::CsvTable& table, PlotKind kind, const std::string& series_name,
                       const std::string& baseline) {
    if (table.rows.empty()) throw std::runtime_error("plot: input has no data rows");
    Chart c;
    switch (kind) {
        case PlotKind::trace: {
            require_columns(table, {"t", "k", "r"}, "trace");
            const auto t = table.column("t"), k = table.column("k");
            Series s{series_name, {}};
            for (const auto& row : table.rows)
                s.points.emplace_back(io::parse_double(row[t]), io::parse_double(row[k]));
            c.series.push_back(std::move(s));
            c.x_label = "generation";
            c.y_label = "fitness distance";
            c.title = "fitness distance per generation";
            break;
        }
        case PlotKind::sweep: {
            c = by_variant(summaries_of(table, "sweep"), [](const auto& s) { return s.mean; });
            c.x_label = "lambda";
            c.y_label = "mean generations";
            c.title = "average runtime";
            break;
        }
        case PlotKind::relative: {
            const auto cells = summaries_of(table, "relative");
            std::vector<experiments::TrialSummary> base, rest;
            for (const auto& s : cells) (s.variant == baseline ? base : rest).push_back(s);
            if (base.empty()) throw std::runtime_error("relative plot: no rows for baseline '" + baseline + "'");
            const auto rel = experiments::relative_runtime(rest, base);
            std::vector<experiments::TrialSummary> as_cells;
            for (const auto& r : rel.cells) {
                experiments::TrialSummary s;
                s.variant = r.variant;
                s.lambda = r.lambda;
                s.mean = r.ratio;
                as_cells.push_back(s);
            }
            c = by_variant(as_cells, [](const auto& s) { return s.mean; });
            c.x_label = "lambda";
            c.y_label = "runtime relative to " + baseline;
            c.title = "relative average runtime";
            break;
        }
        case PlotKind::rate_profile: {
            require_columns(table, {"d", "r"}, "rate-profile");
            const auto d = table.column("d"), r = table.column("r");
            Series s{series_name, {}};
            for (const auto& row : table.rows)
                s.points.emplace_back(io::parse_double(row[d]), io::parse_double(row[r]));
            std::sort(s.points.begin(), s.points.end());
            c.series.push_back(std::move(s));
            c.x_label = "fitness distance";
            c.y_label = "mutation strength";
            c.title = "mutation strength per fitness distance";
            break;
        }
    }
    return c;
}

std::string render_svg(const Chart& chart) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : chart.series)
        for (const auto& [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) throw std::runtime_error("plot: no points");
    if (x1 == x0) { x0 -= 1.0; x1 += 1.0; }
    if (y1 == y0) { y0 -= 1.0; y1 += 1.0; }
    const double xs = nice_step(x1 - x0, 6), ys = nice_step(y1 - y0, 6);
    x0 = std::floor(x0 / xs) * xs; x1 = std::ceil(x1 / xs) * xs;
    y0 = std::floor(y0 / ys) * ys; y1 = std::ceil(y1 / ys) * ys;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(chart.title) << "</text>\n";
    os << "<g class=\"axes\" stroke=\"black\">\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
    os << "</g>\n<g class=\"ticks\">\n";
    for (double x = x0; x <= x1 + xs * 1e-9; x += xs) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(x) << "\" y2=\""
           << kTop + ph + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << px(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
           << tick_label(x) << "</text>\n";
    }
    for (double y = y0; y <= y1 + ys * 1e-9; y += ys) {
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft << "\" y2=\""
           << py(y) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
           << tick_label(y) << "</text>\n";
    }
    os << "</g>\n";
    os << "<text class=\"x-label\" x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
       << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
    os << "<text class=\"y-label\" transform=\"translate(20," << kTop + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n";
    }
    os << "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 15;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly
           << "\" stroke=\"" << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>";
        os << "<text class=\"legend-entry\" x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">"
           << escape(chart.series[i].name) << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void emit_plot(const std::vector<std::string>& inputs, PlotKind kind, const std::string& out_path,
               const std::string& baseline) {
    if (inputs.empty()) throw std::invalid_argument("plot: no input files");
    Chart chart;
    for (const auto& path : inputs) {
        const auto table = io::read_csv_file(path);
        auto part = chart_from_table(table, kind, std::filesystem::path(path).stem().string(), baseline);
        if (chart.series.empty()) {
            chart = std::move(part);
        } else {
            for (auto& s : part.series) chart.series.push_back(std::move(s));
        }
    }
    const auto svg = render_svg(chart);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << svg;
}

}  // namespace adaptea::plot
