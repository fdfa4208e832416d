#include "factornet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "factornet/error.hpp"

namespace factornet {

QuantileMethod parse_quantile_method(const std::string& name) {
    if (name == "linear") return QuantileMethod::Linear;
    if (name == "lower") return QuantileMethod::Lower;
    if (name == "higher") return QuantileMethod::Higher;
    if (name == "midpoint") return QuantileMethod::Midpoint;
    if (name == "nearest") return QuantileMethod::Nearest;
    throw InputError("unknown quantile method '" + name + "'");
}

std::string to_string(QuantileMethod m) {
    switch (m) {
        case QuantileMethod::Linear: return "linear";
        case QuantileMethod::Lower: return "lower";
        case QuantileMethod::Higher: return "higher";
        case QuantileMethod::Midpoint: return "midpoint";
        case QuantileMethod::Nearest: return "nearest";
    }
    return "linear";
}

double quantile_sorted(std::span<const double> sorted, double q, QuantileMethod method) {
    if (sorted.empty()) throw InputError("quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level outside [0, 1]");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    switch (method) {
        case QuantileMethod::Linear: return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
        case QuantileMethod::Lower: return sorted[lo];
        case QuantileMethod::Higher: return frac > 0.0 ? sorted[hi] : sorted[lo];
        case QuantileMethod::Midpoint: return frac > 0.0 ? 0.5 * (sorted[lo] + sorted[hi]) : sorted[lo];
        case QuantileMethod::Nearest: return sorted[static_cast<std::size_t>(std::nearbyint(h))];
    }
    return sorted[lo];
}

double quantile(std::span<const double> values, double q, QuantileMethod method) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q, method);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw InputError("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw InputError("variance needs at least two observations");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("pearson: need two equal-length samples");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw NumericalError("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

SummaryStats summary_stats(std::span<const double> returns, int periods_per_year, QuantileMethod method) {
    const std::size_t n = returns.size();
    if (n < 2) throw InputError("summary_stats needs at least two observations");
    const double nd = static_cast<double>(n);
    const double ppy = static_cast<double>(periods_per_year);

    SummaryStats s;
    double log_growth = 0.0;
    for (double r : returns) log_growth += std::log1p(r);
    const double avg = std::expm1(log_growth * ppy / nd);
    const double var = variance(returns);
    const double vol = std::sqrt(var * ppy);
    s.avg_comp_ret_ann = 100.0 * avg;
    s.vol_ann = 100.0 * vol;

    double downside_ss = 0.0;
    for (double r : returns) {
        if (r < 0.0) downside_ss += r * r;
    }
    const double downside = std::sqrt(downside_ss / nd * ppy);

    if (var > 0.0) {
        s.risk_adj_ret = avg / vol;
        const double m = mean(returns);
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double r : returns) {
            const double d = r - m;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= nd;
        m3 /= nd;
        m4 /= nd;
        if (n >= 3) {
            const double g1 = m3 / std::pow(m2, 1.5);
            s.skew = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
        }
        if (n >= 4) {
            const double g2 = m4 / (m2 * m2) - 3.0;
            s.kurtosis = ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
        }
    }
    if (downside > 0.0) s.sortino = avg / downside;

    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    s.pctile_1 = 100.0 * quantile_sorted(sorted, 0.01, method);
    s.pctile_5 = 100.0 * quantile_sorted(sorted, 0.05, method);
    s.min = 100.0 * sorted.front();
    s.max = 100.0 * sorted.back();
    return s;
}

std::vector<double> ccf(std::span<const double> x, std::span<const double> y, int max_lag) {
    if (x.size() != y.size()) throw InputError("ccf: series lengths differ");
    if (max_lag < 0) throw InputError("ccf: max_lag must be non-negative");
    const std::size_t n = x.size();
    if (n <= static_cast<std::size_t>(max_lag) + 2) throw InputError("ccf: series too short for max_lag");

    std::vector<double> out;
    out.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    for (int l = -max_lag; l <= max_lag; ++l) {
        const std::size_t shift = static_cast<std::size_t>(std::abs(l));
        const std::size_t len = n - shift;
        // l >= 0 pairs x_t with y_{t-l}; l < 0 pairs x_t with y_{t+|l|}.
        auto xs = l >= 0 ? x.subspan(shift, len) : x.subspan(0, len);
        auto ys = l >= 0 ? y.subspan(0, len) : y.subspan(shift, len);
        out.push_back(pearson(xs, ys));
    }
    return out;
}

double tail_es(std::span<const double> values, double q, QuantileMethod method) {
    if (values.size() < 20) throw InputError("tail_es needs at least 20 observations");
    const double threshold = quantile(values, q, method);
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (v > threshold) {
            sum += v;
            ++count;
        }
    }
    if (count == 0) throw NumericalError("tail_es: no observations above the quantile (degenerate tail)");
    return sum / static_cast<double>(count);
}

std::string to_string(IndicatorKind k) { return k == IndicatorKind::Fear ? "fear" : "business_cycle"; }

std::vector<double> indicator_observable(const IndicatorSeries& series, IndicatorKind kind) {
    std::vector<double> obs(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (kind == IndicatorKind::Fear) {
            if (series.open()[i] == 0.0) throw InputError("fear indicator: zero opening level");
            obs[i] = 100.0 * (series.close()[i] - series.open()[i]) / series.open()[i];
        } else {
            obs[i] = series.close()[i];
        }
    }
    return obs;
}

std::vector<std::optional<double>> trailing_zscores(std::span<const std::optional<double>> values,
                                                    std::size_t history_windows, std::size_t min_history,
                                                    bool include_current, bool zero_std_is_error) {
    if (history_windows == 0) throw InputError("trailing_zscores: empty history");
    const std::size_t needed = std::max<std::size_t>(min_history, 2);
    std::vector<std::optional<double>> out(values.size());
    std::vector<double> hist;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k]) continue;
        const std::size_t stop = include_current ? k + 1 : k;  // exclusive
        const std::size_t begin = stop >= history_windows ? stop - history_windows : 0;
        hist.clear();
        for (std::size_t j = begin; j < stop; ++j) {
            if (values[j]) hist.push_back(*values[j]);
        }
        if (hist.size() < needed) continue;
        const double m = mean(hist);
        const double sd = std::sqrt(variance(hist));
        if (sd == 0.0) {
            if (zero_std_is_error) {
                throw NumericalError("trailing_zscores: zero trailing standard deviation at window " +
                                     std::to_string(k));
            }
            out[k] = 0.0;
            continue;
        }
        out[k] = (*values[k] - m) / sd;
    }
    return out;
}

ZScoreSeries indicator_zscores(const IndicatorSeries& series, const std::vector<WindowSpec>& windows,
                               IndicatorKind kind, const ZScoreOptions& options) {
    if (windows.empty()) throw InputError("indicator_zscores: no windows");
    if (series.size() == 0) throw InputError("indicator_zscores: empty series");
    const int step = windows.front().step_months;
    const int length = windows.front().length_months;
    const std::size_t history_windows =
        static_cast<std::size_t>(std::max(1, options.history_years * 12 / std::max(1, step)));
    const std::size_t lead = options.include_current ? history_windows - 1 : history_windows;

    // Extended grid: `lead` windows before the first analysis window, then the analysis windows.
    std::vector<WindowSpec> grid;
    for (std::size_t j = lead; j >= 1; --j) {
        const Date start = add_months(windows.front().start, -static_cast<int>(j) * step);
        grid.push_back(WindowSpec{-static_cast<int>(j), start, add_days(add_months(start, length), -1), length, step});
    }
    grid.insert(grid.end(), windows.begin(), windows.end());

    const std::vector<double> obs = indicator_observable(series, kind);
    const auto& dates = series.dates();
    const int slack_days = 10;

    std::vector<std::optional<double>> es(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const WindowSpec& w = grid[k];
        const bool covered = !(add_days(w.start, slack_days) < dates.front()) &&
                             !(dates.back() < add_days(w.end, -slack_days));
        if (!covered) continue;
        auto lo = std::lower_bound(dates.begin(), dates.end(), w.start);
        auto hi = std::upper_bound(dates.begin(), dates.end(), w.end);
        const auto count = static_cast<std::size_t>(hi - lo);
        if (count < std::max<std::size_t>(options.min_obs, 20)) continue;
        const std::span<const double> window_obs(obs.data() + (lo - dates.begin()), count);
        es[k] = tail_es(window_obs, options.q, options.method);
    }

    std::vector<std::optional<double>> target = es;
    if (options.difference) {
        for (std::size_t k = 0; k < es.size(); ++k) {
            target[k] = (k > 0 && es[k] && es[k - 1]) ? std::optional<double>(*es[k] - *es[k - 1]) : std::nullopt;
        }
    }
    const auto z = trailing_zscores(target, history_windows, options.min_history, options.include_current,
                                    options.zero_std_is_error);

    ZScoreSeries out;
    out.kind = kind;
    for (std::size_t k = lead; k < grid.size(); ++k) {
        out.window_index.push_back(grid[k].index);
        out.es_value.push_back(es[k]);
        out.zscore.push_back(z[k]);
    }
    return out;
}

}  // namespace factornet
