#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace factornet {

using Date = std::chrono::year_month_day;

/// Accepts YYYY-MM-DD, YYYYMMDD and MM/DD/YYYY. Returns nullopt on anything else.
std::optional<Date> parse_date(std::string_view text);

/// ISO-8601 calendar date.
std::string format_date(const Date& d);

/// Calendar month shift; the day is clamped to the end of the target month.
Date add_months(const Date& d, int months);

Date add_days(const Date& d, int days);

/// b - a in days.
int days_between(const Date& a, const Date& b);

Date first_of_month(const Date& d);

bool is_weekday(const Date& d);

}  // namespace factornet
