#include "factornet/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "factornet/error.hpp"

namespace factornet {

namespace {

void check_dates_increasing(const std::vector<Date>& dates, const char* what) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw InputError(std::string(what) + ": dates must be strictly increasing (at " +
                             format_date(dates[i]) + ")");
        }
    }
}

std::string trim(std::string_view s) {
    auto is_junk = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '"' || c == '\''; };
    while (!s.empty() && is_junk(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_junk(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t pos = line.find(delim, begin);
        out.push_back(trim(std::string_view(line).substr(begin, pos - begin)));
        if (pos == std::string::npos) break;
        begin = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name, const std::filesystem::path& path) const {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw InputError("column '" + name + "' not found in " + path.string());
        }
        return static_cast<std::size_t>(it - header.begin());
    }
};

Table read_delimited(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());

    Table table;
    std::string line;
    char delim = ',';
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!have_header) {
            delim = line.find('\t') != std::string::npos ? '\t' : ',';
            table.header = split(line, delim);
            have_header = true;
            continue;
        }
        table.rows.push_back(split(line, delim));
    }
    if (!have_header) throw InputError(path.string() + " has no header row");
    return table;
}

// Sorted dates shared by every input.
std::vector<Date> intersect(const std::vector<const std::vector<Date>*>& sets) {
    std::vector<Date> common = *sets.front();
    for (std::size_t i = 1; i < sets.size(); ++i) {
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), sets[i]->begin(), sets[i]->end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    return common;
}

std::vector<std::size_t> positions_of(const std::vector<Date>& dates, const std::vector<Date>& keep) {
    std::vector<std::size_t> idx;
    idx.reserve(keep.size());
    std::size_t j = 0;
    for (const Date& d : keep) {
        while (j < dates.size() && dates[j] < d) ++j;
        if (j == dates.size() || dates[j] != d) {
            throw InputError("date " + format_date(d) + " not present in series");
        }
        idx.push_back(j++);
    }
    return idx;
}

}  // namespace

ReturnPanel::ReturnPanel(std::vector<Date> dates, std::vector<std::string> names, Eigen::MatrixXd values)
    : dates_(std::move(dates)), names_(std::move(names)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.rows()) != names_.size() ||
        static_cast<std::size_t>(values_.cols()) != dates_.size()) {
        throw InputError("panel shape does not match names/dates");
    }
    check_dates_increasing(dates_, "panel");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw InputError("duplicate factor name '" + n + "'");
    }
    if (!values_.allFinite()) throw InputError("panel contains non-finite values");
}

std::size_t ReturnPanel::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InputError("unknown factor '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> ReturnPanel::series(std::size_t row) const {
    std::vector<double> out(n_obs());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t));
    return out;
}

IndicatorSeries::IndicatorSeries(std::vector<Date> dates, std::vector<double> open, std::vector<double> close)
    : dates_(std::move(dates)), open_(std::move(open)), close_(std::move(close)) {
    if (open_.size() != dates_.size() || close_.size() != dates_.size()) {
        throw InputError("indicator series length mismatch");
    }
    check_dates_increasing(dates_, "indicator");
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (!std::isfinite(open_[i]) || !std::isfinite(close_[i])) {
            throw InputError("indicator series contains non-finite values");
        }
    }
}

PanelLoad load_panel(const std::filesystem::path& path, const std::string& date_column,
                     const std::vector<std::string>& value_columns, double scale) {
    const Table table = read_delimited(path);
    const std::size_t date_idx = date_column.empty() ? 0 : table.column(date_column, path);

    std::vector<std::string> names = value_columns;
    if (names.empty()) {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c != date_idx) names.push_back(table.header[c]);
        }
    }
    if (names.empty()) throw InputError(path.string() + " has no value columns");
    std::vector<std::size_t> cols;
    for (const auto& n : names) cols.push_back(table.column(n, path));

    std::vector<std::pair<Date, std::vector<double>>> rows;
    std::size_t dropped = 0;
    for (const auto& row : table.rows) {
        auto date = date_idx < row.size() ? parse_date(row[date_idx]) : std::nullopt;
        std::vector<double> vals;
        bool ok = date.has_value();
        for (std::size_t c : cols) {
            if (!ok) break;
            auto v = c < row.size() ? parse_number(row[c]) : std::nullopt;
            if (!v) ok = false;
            else vals.push_back(*v * scale);
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        rows.emplace_back(*date, std::move(vals));
    }
    if (rows.empty()) throw InputError(path.string() + ": zero usable rows");

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Date> dates;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(names.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        dates.push_back(rows[t].first);
        for (std::size_t i = 0; i < names.size(); ++i) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[t].second[i];
        }
    }
    return PanelLoad{ReturnPanel(std::move(dates), std::move(names), std::move(values)), dropped};
}

IndicatorLoad load_indicator(const std::filesystem::path& path, const std::string& date_column,
                             const std::string& open_column, const std::string& close_column,
                             double scale) {
    const Table table = read_delimited(path);
    const std::size_t date_idx = date_column.empty() ? 0 : table.column(date_column, path);
    const std::size_t open_idx = table.column(open_column, path);
    const std::size_t close_idx = table.column(close_column, path);

    struct Row {
        Date date;
        double open;
        double close;
    };
    std::vector<Row> rows;
    std::size_t dropped = 0;
    for (const auto& row : table.rows) {
        auto date = date_idx < row.size() ? parse_date(row[date_idx]) : std::nullopt;
        auto o = open_idx < row.size() ? parse_number(row[open_idx]) : std::nullopt;
        auto c = close_idx < row.size() ? parse_number(row[close_idx]) : std::nullopt;
        if (!date || !o || !c) {
            ++dropped;
            continue;
        }
        rows.push_back({*date, *o * scale, *c * scale});
    }
    if (rows.empty()) throw InputError(path.string() + ": zero usable rows");
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });

    std::vector<Date> dates;
    std::vector<double> open, close;
    for (const auto& r : rows) {
        dates.push_back(r.date);
        open.push_back(r.open);
        close.push_back(r.close);
    }
    return IndicatorLoad{IndicatorSeries(std::move(dates), std::move(open), std::move(close)), dropped};
}

ReturnPanel restrict_dates(const ReturnPanel& panel, const std::vector<Date>& keep) {
    const auto idx = positions_of(panel.dates(), keep);
    Eigen::MatrixXd values(panel.values().rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t) {
        values.col(static_cast<Eigen::Index>(t)) = panel.values().col(static_cast<Eigen::Index>(idx[t]));
    }
    return ReturnPanel(keep, panel.names(), std::move(values));
}

IndicatorSeries restrict_dates(const IndicatorSeries& series, const std::vector<Date>& keep) {
    const auto idx = positions_of(series.dates(), keep);
    std::vector<double> open, close;
    open.reserve(idx.size());
    close.reserve(idx.size());
    for (std::size_t i : idx) {
        open.push_back(series.open()[i]);
        close.push_back(series.close()[i]);
    }
    return IndicatorSeries(keep, std::move(open), std::move(close));
}

std::vector<Aligned> align(const std::vector<Aligned>& inputs) {
    if (inputs.empty()) throw InputError("align: no inputs");
    std::vector<const std::vector<Date>*> sets;
    for (const auto& in : inputs) {
        sets.push_back(std::visit([](const auto& x) { return &x.dates(); }, in));
    }
    const std::vector<Date> common = intersect(sets);
    if (common.empty()) throw InputError("align: inputs share no dates");

    std::vector<Aligned> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        out.push_back(std::visit([&](const auto& x) -> Aligned { return restrict_dates(x, common); }, in));
    }
    return out;
}

std::vector<WindowSpec> make_windows(const Date& first_date, const Date& last_date, int length_months,
                                     int step_months) {
    if (length_months < 1 || step_months < 1) throw InputError("window length and step must be positive");
    if (!(first_date < last_date)) throw InputError("make_windows: first_date must precede last_date");

    const Date anchor = first_of_month(first_date);
    std::vector<WindowSpec> windows;
    for (int k = 0;; ++k) {
        const Date start = add_months(anchor, k * step_months);
        const Date end = add_days(add_months(start, length_months), -1);
        if (last_date < end) break;
        windows.push_back(WindowSpec{k, start, end, length_months, step_months});
    }
    if (windows.empty()) {
        throw InputError("make_windows: span " + format_date(first_date) + " to " + format_date(last_date) +
                         " is shorter than one " + std::to_string(length_months) + "-month window");
    }
    return windows;
}

ReturnPanel slice(const ReturnPanel& panel, const WindowSpec& window, std::size_t min_obs) {
    const auto& dates = panel.dates();
    auto lo = std::lower_bound(dates.begin(), dates.end(), window.start);
    auto hi = std::upper_bound(dates.begin(), dates.end(), window.end);
    const auto begin = static_cast<Eigen::Index>(lo - dates.begin());
    const auto count = static_cast<Eigen::Index>(hi - lo);
    if (count == 0 || static_cast<std::size_t>(count) < min_obs) {
        throw InputError("window " + std::to_string(window.index) + " [" + format_date(window.start) + ", " +
                         format_date(window.end) + "] holds " + std::to_string(count) +
                         " observations; need at least " + std::to_string(min_obs));
    }
    return ReturnPanel(std::vector<Date>(lo, hi), panel.names(), panel.values().middleCols(begin, count));
}

}  // namespace factornet
