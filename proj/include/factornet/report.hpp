#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "factornet/glm.hpp"
#include "factornet/panel.hpp"
#include "factornet/stats.hpp"

namespace factornet {

/// Shortest round-tripping-enough decimal ("%.12g"); non-finite values print as "nan"/"inf".
std::string format_number(double v);
/// Empty string for an undefined value.
std::string format_number(const std::optional<double>& v);

/// Writes through a temporary file and renames, so readers never see a partial file.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// One GLM fit of a report table, or the reason it could not be fitted.
struct GlmResult {
    std::string response;
    std::optional<CountRegression> regression;
    std::string error;
};

/// Columns: table,response,variable,coef,std_err,p_value,exp_coef,n_obs,deviance,dispersion,converged,error.
std::string glm_table_csv(const std::string& table, const std::vector<GlmResult>& results);
/// Aligned text layout with the multiplicative effect exp(coef) per unit covariate.
std::string glm_table_text(const std::string& title, const std::vector<GlmResult>& results);

std::string summary_stats_csv(const std::vector<std::string>& names, const std::vector<SummaryStats>& stats);

/// Long format: x,y,lag,value with value = corr(x_t, y_{t-lag}).
std::string ccf_csv_header();
std::string ccf_csv_rows(const std::string& x, const std::string& y, const std::vector<double>& values, int max_lag);

/// Panel in the layout load_panel reads: a Date column, then one column per factor, values
/// divided by `scale` and printed with 17 significant digits.
std::string panel_csv(const ReturnPanel& panel, double scale = 1.0);

std::string zscores_csv(const std::vector<WindowSpec>& windows, const ZScoreSeries& fear, const ZScoreSeries& bc);

}  // namespace factornet
