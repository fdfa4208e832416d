#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "factornet/date.hpp"

namespace factornet {

/// Date-indexed N x T matrix of daily factor returns (decimal fractions). Rows are factors,
/// columns are dates. Immutable once built; the constructor enforces the invariants.
class ReturnPanel {
public:
    ReturnPanel(std::vector<Date> dates, std::vector<std::string> names, Eigen::MatrixXd values);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& values() const { return values_; }

    std::size_t n_factors() const { return names_.size(); }
    std::size_t n_obs() const { return dates_.size(); }

    /// Row of `name`; throws InputError if absent.
    std::size_t index_of(const std::string& name) const;

    /// Copy of one factor's series.
    std::vector<double> series(std::size_t row) const;

private:
    std::vector<Date> dates_;
    std::vector<std::string> names_;
    Eigen::MatrixXd values_;
};

/// Daily index levels. For yield data `open` and `close` both hold the 3M-10Y spread.
class IndicatorSeries {
public:
    IndicatorSeries(std::vector<Date> dates, std::vector<double> open, std::vector<double> close);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<double>& open() const { return open_; }
    const std::vector<double>& close() const { return close_; }
    std::size_t size() const { return dates_.size(); }

private:
    std::vector<Date> dates_;
    std::vector<double> open_;
    std::vector<double> close_;
};

struct WindowSpec {
    int index = 0;
    Date start;
    Date end;
    int length_months = 18;
    int step_months = 3;

    bool contains(const Date& d) const { return start <= d && d <= end; }
};

struct PanelLoad {
    ReturnPanel panel;
    std::size_t dropped_rows = 0;
};

struct IndicatorLoad {
    IndicatorSeries series;
    std::size_t dropped_rows = 0;
};

/// Reads a comma- or tab-separated file with a header row. An empty `date_column` selects the
/// first column; empty `value_columns` selects every other column. Values are multiplied by
/// `scale`. Rows with a missing or unparseable cell are dropped and counted.
PanelLoad load_panel(const std::filesystem::path& path, const std::string& date_column = "",
                     const std::vector<std::string>& value_columns = {}, double scale = 1.0);

/// Reads an indicator file. Passing the same column for open and close stores a level series.
/// `scale` multiplies both columns (use -1 to flip a 10Y-3M spread into 3M-10Y).
IndicatorLoad load_indicator(const std::filesystem::path& path, const std::string& date_column,
                             const std::string& open_column, const std::string& close_column,
                             double scale = 1.0);

using Aligned = std::variant<ReturnPanel, IndicatorSeries>;

/// Restricts every input to the sorted intersection of their date sets.
std::vector<Aligned> align(const std::vector<Aligned>& inputs);

ReturnPanel restrict_dates(const ReturnPanel& panel, const std::vector<Date>& keep);
IndicatorSeries restrict_dates(const IndicatorSeries& series, const std::vector<Date>& keep);

/// Month-based sliding windows. Window k starts on the first day of first_date's month shifted by
/// k * step_months and ends the day before length_months later; windows ending after last_date
/// are dropped.
std::vector<WindowSpec> make_windows(const Date& first_date, const Date& last_date,
                                     int length_months = 18, int step_months = 3);

/// Sub-panel with dates inside the window. Throws InputError if fewer than `min_obs` remain.
ReturnPanel slice(const ReturnPanel& panel, const WindowSpec& window, std::size_t min_obs = 100);

}  // namespace factornet
