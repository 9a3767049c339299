#include "adaptea/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace adaptea::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += xs[i];
    }
    return s + "]";
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            t.comments.emplace_back(trim(body.substr(1)));
            continue;
        }
        auto fields = split(body);
        if (t.columns.empty()) {
            t.columns = std::move(fields);
        } else {
            if (fields.size() != t.columns.size())
                throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(t.columns.size()) + " fields, got " +
                                         std::to_string(fields.size()));
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

void write_header(std::ostream& out, std::string_view command, const ConfigEntries& config,
                  std::uint64_t seed) {
    out << "# adaptea " << kToolVersion << " format=" << kFormatVersion << '\n';
    out << "# command=" << command << '\n';
    out << "# config:";
    for (const auto& [k, v] : config) out << ' ' << k << '=' << v;
    out << '\n';
    out << "# seed=" << seed << '\n';
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not an unsigned integer: '" + std::string(s) + "'");
    return v;
}

std::map<std::string, std::string> parse_flat_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
        const auto key = trim(body.substr(0, eq));
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        kv[std::string(key)] = std::string(trim(body.substr(eq + 1)));
    }
    return kv;
}

std::map<std::string, std::string> read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_flat_config(in);
}

std::string column_diff(const std::vector<std::string>& expected,
                        const std::vector<std::string>& actual) {
    std::vector<std::string> missing, unexpected;
    for (const auto& c : expected)
        if (std::find(actual.begin(), actual.end(), c) == actual.end()) missing.push_back(c);
    for (const auto& c : actual)
        if (std::find(expected.begin(), expected.end(), c) == expected.end()) unexpected.push_back(c);
    return "missing " + join(missing) + "; unexpected " + join(unexpected);
}

}  // namespace adaptea::io
