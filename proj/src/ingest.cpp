#include "icebreaker/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace icebreaker {

namespace {

constexpr double kMissingSentinel = -99.9;

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
    }
    return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    return fields;
}

bool starts_with_year(const std::string& line) {
    std::size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos || i + 4 > line.size()) return false;
    for (std::size_t k = 0; k < 4; ++k)
        if (!std::isdigit(static_cast<unsigned char>(line[i + k]))) return false;
    // a 4-digit token, not a longer number
    return i + 4 == line.size() || line[i + 4] == ' ' || line[i + 4] == '\t';
}

double parse_number(const std::string& tok, std::size_t row, std::size_t col) {
    double v;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) {
        throw std::runtime_error("non-numeric value '" + tok + "' at row " + std::to_string(row) +
                                 ", column " + std::to_string(col));
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string season_name(Season s) {
    switch (s) {
        case Season::Summer: return "summer";
        case Season::Winter: return "winter";
        case Season::Annual: return "annual";
        case Season::Raw: return "raw";
    }
    return "raw";
}

Season season_from_name(const std::string& name) {
    if (name == "summer") return Season::Summer;
    if (name == "winter") return Season::Winter;
    if (name == "annual") return Season::Annual;
    if (name == "raw") return Season::Raw;
    throw std::invalid_argument("unknown season '" + name + "'");
}

MonthlySeries parse_monthly_fixedwidth(const std::string& text, const std::string& name) {
    MonthlySeries out;
    out.name = name;
    const auto lines = split_lines(text);
    bool seen_data = false;
    int expected_year = 0;
    std::size_t row = 0;
    for (const auto& line : lines) {
        ++row;
        if (!starts_with_year(line)) {
            if (!seen_data) continue; // header
            if (split_ws(line).empty()) continue;
            throw std::runtime_error("malformed row " + std::to_string(row) +
                                     ": expected a 4-digit year");
        }
        const auto fields = split_ws(line);
        if (fields.size() < 13)
            throw std::runtime_error("row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size() - 1) +
                                     " monthly columns, expected 12");
        if (fields.size() > 14)
            throw std::runtime_error("row " + std::to_string(row) + " has too many columns");
        const int year = static_cast<int>(parse_number(fields[0], row, 1));
        if (!seen_data) {
            out.first_year = year;
            seen_data = true;
        } else {
            if (year == expected_year + 1) {
                // contiguous
            } else if (year > expected_year + 1) {
                throw std::runtime_error("gap at " + std::to_string(expected_year + 1));
            } else {
                throw std::runtime_error("years not ascending at row " + std::to_string(row));
            }
        }
        expected_year = year;
        for (std::size_t m = 0; m < 12; ++m) {
            const double v = parse_number(fields[m + 1], row, m + 2);
            if (std::fabs(v - kMissingSentinel) < 1e-9) {
                out.values.push_back(std::numeric_limits<double>::quiet_NaN());
                out.missing.push_back(1);
            } else {
                out.values.push_back(v);
                out.missing.push_back(0);
            }
        }
    }
    if (!seen_data) throw std::runtime_error("no data rows found");
    return out;
}

AnnualSeries parse_annual_csv(const std::string& text, const std::string& name) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "year,value")
        throw std::runtime_error("expected header 'year,value'");
    AnnualSeries out;
    out.name = name;
    out.season = Season::Raw;
    bool seen_data = false;
    int prev_year = 0;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::string& line = lines[row];
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("row " + std::to_string(row + 1) + ": missing comma");
        const int year = static_cast<int>(parse_number(line.substr(0, comma), row + 1, 1));
        const std::string value_field = line.substr(comma + 1);
        if (seen_data) {
            if (year == prev_year)
                throw std::runtime_error("duplicate year " + std::to_string(year));
            if (year < prev_year)
                throw std::runtime_error("years not ascending at " + std::to_string(year));
            if (year > prev_year + 1)
                throw std::runtime_error("gap at " + std::to_string(prev_year + 1));
        } else {
            out.first_year = year;
            seen_data = true;
        }
        prev_year = year;
        if (value_field.empty()) {
            out.values.push_back(std::numeric_limits<double>::quiet_NaN());
            out.missing.push_back(1);
        } else {
            out.values.push_back(parse_number(value_field, row + 1, 2));
            out.missing.push_back(0);
        }
    }
    if (!seen_data) throw std::runtime_error("no data rows found");
    return out;
}

std::string serialize_monthly_fixedwidth(const MonthlySeries& m) {
    std::string out;
    for (std::size_t y = 0; y < m.years(); ++y) {
        out += std::to_string(m.first_year + static_cast<int>(y));
        for (std::size_t j = 0; j < 12; ++j) {
            out += ' ';
            out += m.is_missing(y, j) ? "-99.9" : format_double(m.value(y, j));
        }
        out += '\n';
    }
    return out;
}

std::string serialize_annual_csv(const AnnualSeries& s) {
    std::string out = "year,value\n";
    for (std::size_t t = 0; t < s.size(); ++t) {
        out += std::to_string(s.first_year + static_cast<int>(t));
        out += ',';
        if (!s.missing[t]) out += format_double(s.values[t]);
        out += '\n';
    }
    return out;
}

AnnualSeries seasonal_aggregate(const MonthlySeries& m, Season season) {
    if (m.years() == 0) throw std::invalid_argument("seasonal_aggregate: empty series");
    if (season != Season::Summer && season != Season::Winter)
        throw std::invalid_argument("seasonal_aggregate: season must be summer or winter");
    AnnualSeries out;
    out.name = m.name;
    out.season = season;
    out.first_year = m.first_year;
    out.unit = "degC";
    const std::size_t n = m.years();
    out.values.resize(n);
    out.missing.resize(n);
    for (std::size_t y = 0; y < n; ++y) {
        double sum = 0.0;
        bool miss = false;
        if (season == Season::Summer) {
            for (std::size_t j = 5; j <= 7; ++j) { // Jun, Jul, Aug
                if (m.is_missing(y, j)) miss = true;
                else sum += m.value(y, j);
            }
        } else {
            // December belongs to the following year's winter
            if (y == 0) {
                miss = true;
            } else if (m.is_missing(y - 1, 11) || m.is_missing(y, 0) || m.is_missing(y, 1)) {
                miss = true;
            } else {
                sum = m.value(y - 1, 11) + m.value(y, 0) + m.value(y, 1);
            }
        }
        out.missing[y] = miss ? 1 : 0;
        out.values[y] = miss ? std::numeric_limits<double>::quiet_NaN() : sum / 3.0;
    }
    return out;
}

AnnualSeries impute_median(const AnnualSeries& s) {
    std::vector<double> present;
    for (std::size_t t = 0; t < s.size(); ++t)
        if (!s.missing[t]) present.push_back(s.values[t]);
    if (present.empty()) throw std::invalid_argument("impute_median: all values missing");
    const double med = median_of(std::move(present));
    AnnualSeries out = s;
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (out.missing[t]) {
            out.values[t] = med;
            out.missing[t] = 0;
        }
    }
    return out;
}

AnnualSeries demean(const AnnualSeries& s) {
    if (s.size() == 0) throw std::invalid_argument("demean: empty series");
    if (s.has_missing())
        throw std::invalid_argument("demean: series has missing values; impute first");
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.size());
    AnnualSeries out = s;
    for (double& v : out.values) v -= mean;
    return out;
}

AnnualSeries window(const AnnualSeries& s, int from_year, int to_year) {
    if (from_year > to_year) throw std::invalid_argument("window: from_year > to_year");
    if (from_year < s.first_year || to_year > s.last_year())
        throw std::invalid_argument("window: [" + std::to_string(from_year) + ", " +
                                    std::to_string(to_year) + "] outside series range [" +
                                    std::to_string(s.first_year) + ", " +
                                    std::to_string(s.last_year()) + "]");
    AnnualSeries out;
    out.name = s.name;
    out.season = s.season;
    out.unit = s.unit;
    out.first_year = from_year;
    const std::size_t a = static_cast<std::size_t>(from_year - s.first_year);
    const std::size_t b = static_cast<std::size_t>(to_year - s.first_year);
    out.values.assign(s.values.begin() + a, s.values.begin() + b + 1);
    out.missing.assign(s.missing.begin() + a, s.missing.begin() + b + 1);
    return out;
}

} // namespace icebreaker
