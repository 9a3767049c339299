#pragma once

// Static SVG line charts for traces, sweeps, relative runtimes and rate profiles.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adaptea/io.hpp"

namespace adaptea::plot {

enum class PlotKind { trace, sweep, relative, rate_profile };

PlotKind parse_plot_kind(std::string_view s);

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Builds the chart for one input table. Throws std::runtime_error with a
/// column diff when the table does not have the schema the kind expects.
Chart chart_from_table(const io::CsvTable& table, PlotKind kind, const std::string& series_name,
                       const std::string& baseline = "static");

std::string render_svg(const Chart& chart);

/// Reads the inputs, renders, and writes `out_path` only if every input was valid.
void emit_plot(const std::vector<std::string>& inputs, PlotKind kind, const std::string& out_path,
               const std::string& baseline = "static");

}  // namespace adaptea::plot
