#ifndef ICEBREAKER_INGEST_HPP
#define ICEBREAKER_INGEST_HPP

#include <string>

#include "icebreaker/annual_series.hpp"

namespace icebreaker {

/// Parses the fixed-width monthly record format: optional header lines, then
/// one row per year beginning with a 4-digit year followed by 12 monthly
/// values (an optional 13th annual column is ignored). The sentinel -99.9
/// marks a missing month. Years must be contiguous and ascending.
MonthlySeries parse_monthly_fixedwidth(const std::string& text, const std::string& name = "");

/// Parses a two-column CSV with header "year,value". An empty value field
/// means missing. Years must be contiguous and ascending.
AnnualSeries parse_annual_csv(const std::string& text, const std::string& name = "");

std::string serialize_monthly_fixedwidth(const MonthlySeries& m);
std::string serialize_annual_csv(const AnnualSeries& s);

/// Seasonal means. Summer of year t averages Jun-Aug of t; winter of year t
/// averages Dec of t-1 with Jan and Feb of t, so the first winter is always
/// missing. Any missing contributing month makes the seasonal value missing.
AnnualSeries seasonal_aggregate(const MonthlySeries& m, Season season);

/// Replaces every missing value by the median of the non-missing ones and
/// clears the mask.
AnnualSeries impute_median(const AnnualSeries& s);

/// Subtracts the mean; requires a complete series (impute first).
AnnualSeries demean(const AnnualSeries& s);

/// Inclusive year window; bounds must lie inside the series.
AnnualSeries window(const AnnualSeries& s, int from_year, int to_year);

} // namespace icebreaker

#endif
