#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factornet/panel.hpp"

namespace factornet {

/// Sample quantile conventions (numpy names). `Linear` is Hyndman-Fan type 7.
enum class QuantileMethod { Linear, Lower, Higher, Midpoint, Nearest };

QuantileMethod parse_quantile_method(const std::string& name);
std::string to_string(QuantileMethod m);

/// Quantile of already-sorted data.
double quantile_sorted(std::span<const double> sorted, double q, QuantileMethod method = QuantileMethod::Linear);
double quantile(std::span<const double> values, double q, QuantileMethod method = QuantileMethod::Linear);

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double pearson(std::span<const double> x, std::span<const double> y);

/// Factor summary in the layout of a performance table. Return and risk fields are percentages;
/// ratio fields are empty when the series has no variance (or no downside for Sortino).
struct SummaryStats {
    double avg_comp_ret_ann = 0.0;  ///< annualized compounded return, %
    double vol_ann = 0.0;           ///< annualized volatility, %
    std::optional<double> risk_adj_ret;
    std::optional<double> sortino;
    std::optional<double> skew;      ///< bias-adjusted sample skewness
    std::optional<double> kurtosis;  ///< bias-adjusted excess kurtosis
    double pctile_1 = 0.0;           ///< daily %, same for the fields below
    double pctile_5 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SummaryStats summary_stats(std::span<const double> returns, int periods_per_year = 252,
                           QuantileMethod method = QuantileMethod::Linear);

/// Cross-correlation for lags -max_lag..max_lag; entry max_lag + l is corr(x_t, y_{t-l}) over the
/// overlapping range.
std::vector<double> ccf(std::span<const double> x, std::span<const double> y, int max_lag);

/// Mean of the observations strictly above the q-quantile. Needs at least 20 values.
double tail_es(std::span<const double> values, double q = 0.95, QuantileMethod method = QuantileMethod::Linear);

enum class IndicatorKind { Fear, BusinessCycle };
std::string to_string(IndicatorKind k);

struct ZScoreOptions {
    int history_years = 10;
    /// Trailing ES values (including the current one when include_current) needed for a z-score.
    std::size_t min_history = 2;
    bool include_current = true;
    /// Z-score the first difference of the ES series instead of its level.
    bool difference = false;
    /// When false a zero trailing deviation yields z = 0 instead of an error.
    bool zero_std_is_error = true;
    double q = 0.95;
    QuantileMethod method = QuantileMethod::Linear;
    std::size_t min_obs = 20;
};

struct ZScoreSeries {
    IndicatorKind kind = IndicatorKind::Fear;
    std::vector<int> window_index;
    std::vector<std::optional<double>> es_value;
    std::vector<std::optional<double>> zscore;
};

/// Daily observable of an indicator: percent open-to-close change (fear) or spread level.
std::vector<double> indicator_observable(const IndicatorSeries& series, IndicatorKind kind);

/// Trailing z-scores over a regular window grid. Element k is standardized against the
/// `history_windows` most recent values ending at k (or at k-1 when include_current is false).
std::vector<std::optional<double>> trailing_zscores(std::span<const std::optional<double>> values,
                                                    std::size_t history_windows, std::size_t min_history,
                                                    bool include_current = true, bool zero_std_is_error = true);

/// Windowed expected shortfall of the indicator and its z-score against the trailing
/// `history_years`. Windows before the first analysis window (same grid) feed the history when
/// the series covers them.
ZScoreSeries indicator_zscores(const IndicatorSeries& series, const std::vector<WindowSpec>& windows,
                               IndicatorKind kind, const ZScoreOptions& options = {});

}  // namespace factornet
