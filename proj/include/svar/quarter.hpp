#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace svar {

// Calendar quarter, e.g. 2020Q1. Serialized as "YYYYQn".
struct QuarterIndex {
    int year = 0;
    int quarter = 1;  // 1..4

    QuarterIndex() = default;
    QuarterIndex(int y, int q) : year(y), quarter(q) {
        if (q < 1 || q > 4) throw std::invalid_argument("quarter must be in 1..4");
    }

    auto operator<=>(const QuarterIndex&) const = default;

    QuarterIndex next() const {
        return quarter == 4 ? QuarterIndex{year + 1, 1} : QuarterIndex{year, quarter + 1};
    }

    // Signed distance in quarters: (*this) - other.
    int minus(const QuarterIndex& other) const {
        return (year - other.year) * 4 + (quarter - other.quarter);
    }

    QuarterIndex plus(int k) const {
        int idx = year * 4 + (quarter - 1) + k;
        int y = idx / 4;
        int r = idx % 4;
        if (r < 0) { r += 4; --y; }
        return QuarterIndex{y, r + 1};
    }

    std::string str() const {
        return std::to_string(year) + "Q" + std::to_string(quarter);
    }

    static QuarterIndex parse(const std::string& s);
};

// Calendar month, serialized as "YYYY-MM".
struct MonthIndex {
    int year = 0;
    int month = 1;  // 1..12

    MonthIndex() = default;
    MonthIndex(int y, int m) : year(y), month(m) {
        if (m < 1 || m > 12) throw std::invalid_argument("month must be in 1..12");
    }

    auto operator<=>(const MonthIndex&) const = default;

    bool is_quarter_end() const { return month % 3 == 0; }
    QuarterIndex quarter_of() const { return QuarterIndex{year, (month - 1) / 3 + 1}; }

    std::string str() const;
    static MonthIndex parse(const std::string& s);
};

}  // namespace svar
