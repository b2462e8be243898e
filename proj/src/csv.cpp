#include "strichartz/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace strichartz {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
    bool first = true;
    for (auto h : header) {
        if (!first) out_ << ',';
        out_ << h;
        first = false;
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) {
    row_.push_back(format_double(value));
    return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
    row_.push_back(std::to_string(value));
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
    row_.emplace_back(text);
    return *this;
}

void CsvWriter::end_row() {
    if (row_.size() != columns_) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(row_.size()) +
                               " cells, header has " + std::to_string(columns_));
    }
    for (std::size_t i = 0; i < row_.size(); ++i) {
        if (i) out_ << ',';
        out_ << row_[i];
    }
    out_ << '\n';
    row_.clear();
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

}  // namespace strichartz
