#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace strichartz {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// Minimal CSV writer: fixed header, rows of pre-formatted cells.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(std::string_view text);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::vector<std::string> row_;
};

// Splits one CSV line on commas (no quoting; our files never need it).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace strichartz
