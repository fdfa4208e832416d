#include "factornet/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "factornet/error.hpp"

namespace factornet {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out) throw InputError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string glm_table_csv(const std::string& table, const std::vector<GlmResult>& results) {
    std::string out = "table,response,variable,coef,std_err,p_value,exp_coef,n_obs,deviance,dispersion,converged,error\n";
    for (const auto& r : results) {
        if (!r.regression) {
            out += csv_field(table) + "," + csv_field(r.response) + ",,,,,,,,,0," + csv_field(r.error) + "\n";
            continue;
        }
        const auto& reg = *r.regression;
        for (std::size_t k = 0; k < reg.variables.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            out += csv_field(table) + "," + csv_field(reg.response) + "," + csv_field(reg.variables[k]) + "," +
                   format_number(reg.fit.coef(i)) + "," + format_number(reg.fit.std_err(i)) + "," +
                   format_number(reg.fit.p_value(i)) + "," + format_number(std::exp(reg.fit.coef(i))) + "," +
                   std::to_string(reg.n_obs) + "," + format_number(reg.fit.deviance) + "," +
                   format_number(reg.fit.dispersion) + "," + (reg.fit.converged ? "1" : "0") + ",\n";
        }
    }
    return out;
}

std::string glm_table_text(const std::string& title, const std::vector<GlmResult>& results) {
    std::string out = title + "\n" + std::string(title.size(), '=') + "\n";
    for (const auto& r : results) {
        out += "\n" + r.response + "\n";
        if (!r.regression) {
            out += "  not fitted: " + r.error + "\n";
            continue;
        }
        const auto& reg = *r.regression;
        out += "  " + pad("variable", 14) + pad("coef", 14) + pad("std err", 12) + pad("p-value", 11) + "exp(coef)\n";
        for (std::size_t k = 0; k < reg.variables.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            const double p = reg.fit.p_value(i);
            const std::string stars = p < 0.01 ? "***" : p < 0.05 ? "**" : p < 0.1 ? "*" : "";
            out += "  " + pad(reg.variables[k], 14) + pad(fixed(reg.fit.coef(i), 6), 14) +
                   pad(fixed(reg.fit.std_err(i), 6), 12) + pad(fixed(p, 4) + stars, 11) +
                   fixed(std::exp(reg.fit.coef(i)), 6) + "\n";
        }
        out += "  n = " + std::to_string(reg.n_obs) + ", deviance = " + fixed(reg.fit.deviance, 3) +
               ", dispersion = " + fixed(reg.fit.dispersion, 3) + "\n";
    }
    return out;
}

std::string summary_stats_csv(const std::vector<std::string>& names, const std::vector<SummaryStats>& stats) {
    if (names.size() != stats.size()) throw InputError("summary_stats_csv: size mismatch");
    std::string out = "factor,avg_comp_ret_ann_pct,vol_ann_pct,risk_adj_ret,sortino,skew,kurtosis,pctile_1_pct,"
                      "pctile_5_pct,min_pct,max_pct\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& s = stats[i];
        out += csv_field(names[i]) + "," + format_number(s.avg_comp_ret_ann) + "," + format_number(s.vol_ann) + "," +
               format_number(s.risk_adj_ret) + "," + format_number(s.sortino) + "," + format_number(s.skew) + "," +
               format_number(s.kurtosis) + "," + format_number(s.pctile_1) + "," + format_number(s.pctile_5) + "," +
               format_number(s.min) + "," + format_number(s.max) + "\n";
    }
    return out;
}

std::string ccf_csv_header() { return "x,y,lag,value\n"; }

std::string ccf_csv_rows(const std::string& x, const std::string& y, const std::vector<double>& values, int max_lag) {
    if (values.size() != static_cast<std::size_t>(2 * max_lag + 1)) throw InputError("ccf_csv_rows: size mismatch");
    std::string out;
    for (int l = -max_lag; l <= max_lag; ++l) {
        out += csv_field(x) + "," + csv_field(y) + "," + std::to_string(l) + "," +
               format_number(values[static_cast<std::size_t>(l + max_lag)]) + "\n";
    }
    return out;
}

std::string panel_csv(const ReturnPanel& panel, double scale) {
    if (!(scale != 0.0) || !std::isfinite(scale)) throw InputError("panel_csv: scale must be finite and nonzero");
    std::string out = "Date";
    for (const auto& n : panel.names()) out += "," + csv_field(n);
    out += "\n";
    char buf[40];
    for (std::size_t t = 0; t < panel.n_obs(); ++t) {
        out += format_date(panel.dates()[t]);
        for (std::size_t i = 0; i < panel.n_factors(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g",
                          panel.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) / scale);
            out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string zscores_csv(const std::vector<WindowSpec>& windows, const ZScoreSeries& fear, const ZScoreSeries& bc) {
    if (fear.zscore.size() != windows.size() || bc.zscore.size() != windows.size()) {
        throw InputError("zscores_csv: size mismatch");
    }
    std::string out = "window,start,end,fear_es,f_zscore,bc_es,bc_zscore\n";
    for (std::size_t k = 0; k < windows.size(); ++k) {
        out += std::to_string(windows[k].index) + "," + format_date(windows[k].start) + "," +
               format_date(windows[k].end) + "," + format_number(fear.es_value[k]) + "," +
               format_number(fear.zscore[k]) + "," + format_number(bc.es_value[k]) + "," +
               format_number(bc.zscore[k]) + "\n";
    }
    return out;
}

}  // namespace factornet
