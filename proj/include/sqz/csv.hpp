// csv.hpp — deterministic CSV emission

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sqz::cli {

// Shortest representation that round-trips (at most 17 significant digits);
// infinities are written as `inf` / `-inf`.
std::string format_double(double v);

std::string format_bool(bool v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t columns() const { return header_.size(); }
    bool has_column(std::string_view name) const;

    // Row must have exactly columns() cells.
    void add_row(std::vector<std::string> row);

    std::string to_string() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace sqz::cli
