#pragma once

// Plain CSV with '#' comment lines, the common output header and the flat
// key=value configuration format.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adaptea::io {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

struct CsvTable {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Fields may not contain commas or newlines; no quoting is performed.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Writes the header every output file starts with: tool/format version,
/// command, fully resolved configuration and base seed.
void write_header(std::ostream& out, std::string_view command, const ConfigEntries& config,
                  std::uint64_t seed);

/// Shortest round-trip decimal representation.
std::string format_double(double v);
double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

/// Flat `key=value` lines; blank lines and lines starting with '#' ignored.
/// Throws std::runtime_error naming the line on malformed input.
std::map<std::string, std::string> parse_flat_config(std::istream& in);
std::map<std::string, std::string> read_flat_config(const std::string& path);

/// Column diff used in schema-mismatch errors, e.g. "missing [a, b]; unexpected [c]".
std::string column_diff(const std::vector<std::string>& expected,
                        const std::vector<std::string>& actual);

}  // namespace adaptea::io
