#include "factornet/date.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace factornet {

namespace {

std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<Date> make_date(std::optional<int> y, std::optional<int> m, std::optional<int> d) {
    if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
    Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
              std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        return make_date(parse_int(text.substr(0, 4)), parse_int(text.substr(5, 2)),
                         parse_int(text.substr(8, 2)));
    }
    if (text.size() == 8) {
        return make_date(parse_int(text.substr(0, 4)), parse_int(text.substr(4, 2)),
                         parse_int(text.substr(6, 2)));
    }
    if (text.size() == 10 && text[2] == '/' && text[5] == '/') {
        return make_date(parse_int(text.substr(6, 4)), parse_int(text.substr(0, 2)),
                         parse_int(text.substr(3, 2)));
    }
    return std::nullopt;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Date add_months(const Date& d, int months) {
    using namespace std::chrono;
    const year_month shifted = year_month{d.year(), d.month()} + std::chrono::months{months};
    const Date last = year_month_day_last{shifted.year(), month_day_last{shifted.month()}};
    const day dd = d.day() > last.day() ? last.day() : d.day();
    return Date{shifted.year(), shifted.month(), dd};
}

Date add_days(const Date& d, int days) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

int days_between(const Date& a, const Date& b) {
    return static_cast<int>((std::chrono::sys_days{b} - std::chrono::sys_days{a}).count());
}

Date first_of_month(const Date& d) { return Date{d.year(), d.month(), std::chrono::day{1}}; }

bool is_weekday(const Date& d) {
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace factornet
