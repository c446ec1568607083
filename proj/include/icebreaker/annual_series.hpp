#ifndef ICEBREAKER_ANNUAL_SERIES_HPP
#define ICEBREAKER_ANNUAL_SERIES_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace icebreaker {

enum class Season { Summer, Winter, Annual, Raw };

std::string season_name(Season s);
Season season_from_name(const std::string& name);

/// Year-by-month grid of observations. Years are contiguous starting at
/// first_year; a set missing flag excludes the cell from every aggregate.
struct MonthlySeries {
    std::string name;
    int first_year = 1;
    std::vector<double> values;   // year-major, 12 columns
    std::vector<uint8_t> missing; // same layout

    std::size_t years() const { return values.size() / 12; }
    double value(std::size_t year_index, std::size_t month_index) const {
        return values[year_index * 12 + month_index];
    }
    bool is_missing(std::size_t year_index, std::size_t month_index) const {
        return missing[year_index * 12 + month_index] != 0;
    }
};

/// Named annual series, the common input of every analysis. Observation t
/// belongs to calendar year first_year + t.
struct AnnualSeries {
    std::string name;
    Season season = Season::Raw;
    int first_year = 1;
    std::vector<double> values;
    std::vector<uint8_t> missing;
    std::string unit;

    std::size_t size() const { return values.size(); }
    int last_year() const { return first_year + static_cast<int>(values.size()) - 1; }
    bool has_missing() const {
        for (uint8_t m : missing)
            if (m) return true;
        return false;
    }
};

} // namespace icebreaker

#endif
