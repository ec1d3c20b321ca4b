// csv.hpp — locale-free CSV tables with a fixed numeric format
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qbm::cli {

// Scientific notation, 17 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

class CsvTable {
public:
    // Each column is "name [unit]" or just "name" for dimensionless data.
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> cells);

    std::size_t rows() const noexcept { return rows_.size(); }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::string render() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

} // namespace qbm::cli
