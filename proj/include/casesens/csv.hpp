#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casesens::csv {

// A header-indexed CSV document. Fields are kept as raw strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name, or nullopt when absent.
    std::optional<std::size_t> column(std::string_view name) const;
    // Column index by name; throws ParseError when absent.
    std::size_t require_column(std::string_view name) const;
};

// Reads RFC-4180-style CSV (quoted fields, doubled quotes). Blank lines are skipped.
Table read(std::istream& in);
Table read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trip decimal representation.
std::string format_double(double value);
// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace casesens::csv
