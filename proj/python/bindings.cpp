#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "factornet/config.hpp"
#include "factornet/date.hpp"
#include "factornet/error.hpp"
#include "factornet/glm.hpp"
#include "factornet/graph.hpp"
#include "factornet/lingam.hpp"
#include "factornet/netinfer.hpp"
#include "factornet/pipeline.hpp"
#include "factornet/stats.hpp"
#include "factornet/synth.hpp"
#include "factornet/var.hpp"

namespace py = pybind11;
using namespace factornet;

namespace {

// Python passes T x N (observations in rows); the core works on N x T.
ReturnPanel make_panel(const Eigen::MatrixXd& values, std::vector<std::string> names,
                       const std::vector<std::string>& dates) {
    const auto n = static_cast<std::size_t>(values.cols());
    if (names.empty()) {
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    }
    std::vector<Date> parsed;
    if (dates.empty()) {
        Date d{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};
        while (parsed.size() < static_cast<std::size_t>(values.rows())) {
            if (is_weekday(d)) parsed.push_back(d);
            d = add_days(d, 1);
        }
    } else {
        for (const auto& s : dates) {
            const auto d = parse_date(s);
            if (!d) throw InputError("bad date '" + s + "'");
            parsed.push_back(*d);
        }
    }
    return ReturnPanel(std::move(parsed), std::move(names), values.transpose());
}

ResampleOptions resample(int replicates, double alpha, std::uint64_t seed, const std::string& scheme,
                         std::size_t threads) {
    ResampleOptions ro;
    ro.replicates = replicates;
    ro.alpha = alpha;
    ro.seed = seed;
    ro.scheme = parse_resample_scheme(scheme);
    ro.threads = threads;
    return ro;
}

py::dict model_dict(const CausalModel& m) {
    py::dict d;
    d["lags"] = m.lags;
    d["w0"] = m.w0;
    d["lagged"] = m.lagged;
    d["reduced"] = m.var.coefficients;
    d["intercept"] = Eigen::VectorXd(m.var.intercept);
    d["order"] = m.order;
    d["names"] = m.names;
    return d;
}

}  // namespace

PYBIND11_MODULE(_factornet, m) {
    m.doc() = "Factor network estimation core";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "simulate",
        [](int n, int lags, int t, double density, const std::string& noise, double df, std::uint64_t seed) {
            const Simulation sim = generate(random_svar_spec(n, lags, t, density, {parse_noise_kind(noise), df}, seed));
            std::vector<std::string> dates;
            for (const auto& d : sim.panel.dates()) dates.push_back(format_date(d));
            py::dict out;
            out["values"] = Eigen::MatrixXd(sim.panel.values().transpose());
            out["names"] = sim.panel.names();
            out["dates"] = dates;
            out["w0"] = sim.truth.w0;
            out["lagged"] = sim.truth.lagged;
            return out;
        },
        py::arg("n"), py::arg("lags") = 1, py::arg("t") = 1000, py::arg("density") = 0.3,
        py::arg("noise") = "laplace", py::arg("df") = 5.0, py::arg("seed") = 0);

    m.def(
        "select_lag", [](const Eigen::MatrixXd& values, int max_lag) { return select_lag(values.transpose(), max_lag); },
        py::arg("values"), py::arg("max_lag") = 5);

    m.def(
        "var_lingam",
        [](const Eigen::MatrixXd& values, int lags, const std::vector<std::string>& names) {
            return model_dict(var_lingam(Eigen::MatrixXd(values.transpose()), lags, names));
        },
        py::arg("values"), py::arg("lags") = 1, py::arg("names") = std::vector<std::string>{});

    m.def(
        "causal_order",
        [](const Eigen::MatrixXd& values) { return causal_order(ResidualPanel{values.transpose(), {}}); },
        py::arg("values"));

    m.def(
        "entropy", [](const std::vector<double>& u) { return entropy_approx(u); }, py::arg("u"));

    m.def(
        "causal_network",
        [](const Eigen::MatrixXd& values, std::vector<std::string> names, std::vector<std::string> dates,
           std::optional<int> lags, int max_lag, int replicates, double alpha, std::uint64_t seed,
           const std::string& scheme, std::size_t threads) {
            const ReturnPanel panel = make_panel(values, std::move(names), dates);
            const int l = lags ? *lags : select_lag(panel, max_lag);
            return to_json(causal_network(panel, l, resample(replicates, alpha, seed, scheme, threads))).dump();
        },
        py::arg("values"), py::arg("names") = std::vector<std::string>{}, py::arg("dates") = std::vector<std::string>{},
        py::arg("lags") = std::nullopt, py::arg("max_lag") = 5, py::arg("replicates") = 5000, py::arg("alpha") = 0.05,
        py::arg("seed") = 0, py::arg("scheme") = "residual", py::arg("threads") = 1);

    m.def(
        "correlation_network",
        [](const Eigen::MatrixXd& values, std::vector<std::string> names, std::vector<std::string> dates,
           int replicates, double alpha, std::uint64_t seed, const std::string& scheme, std::size_t threads) {
            const ReturnPanel panel = make_panel(values, std::move(names), dates);
            return to_json(correlation_network(panel, resample(replicates, alpha, seed, scheme, threads))).dump();
        },
        py::arg("values"), py::arg("names") = std::vector<std::string>{}, py::arg("dates") = std::vector<std::string>{},
        py::arg("replicates") = 5000, py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("scheme") = "residual",
        py::arg("threads") = 1);

    m.def(
        "fit_poisson",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
            const GlmFit fit = fit_poisson(y, x);
            py::dict out;
            out["coef"] = fit.coef;
            out["std_err"] = fit.std_err;
            out["p_value"] = fit.p_value;
            out["deviance"] = fit.deviance;
            out["dispersion"] = fit.dispersion;
            out["converged"] = fit.converged;
            out["n_iter"] = fit.n_iter;
            return out;
        },
        py::arg("y"), py::arg("x"));

    m.def(
        "ccf",
        [](const std::vector<double>& x, const std::vector<double>& y, int max_lag) { return ccf(x, y, max_lag); },
        py::arg("x"), py::arg("y"), py::arg("max_lag") = 10);

    m.def(
        "summary_stats",
        [](const std::vector<double>& returns) {
            const SummaryStats s = summary_stats(returns);
            py::dict out;
            out["avg_comp_ret_ann"] = s.avg_comp_ret_ann;
            out["vol_ann"] = s.vol_ann;
            out["risk_adj_ret"] = s.risk_adj_ret;
            out["sortino"] = s.sortino;
            out["skew"] = s.skew;
            out["kurtosis"] = s.kurtosis;
            out["pctile_1"] = s.pctile_1;
            out["pctile_5"] = s.pctile_5;
            out["min"] = s.min;
            out["max"] = s.max;
            return out;
        },
        py::arg("returns"));

    m.def(
        "jaccard",
        [](const std::string& previous, const std::string& current) {
            const JaccardScore j = jaccard(edge_set(network_from_json(nlohmann::json::parse(previous))),
                                           edge_set(network_from_json(nlohmann::json::parse(current))));
            return py::make_tuple(j.value, j.both_empty);
        },
        py::arg("previous"), py::arg("current"));

    m.def(
        "run",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir, std::size_t threads) {
            RunConfig cfg = load_config(config);
            if (output_dir) cfg.output_dir = *output_dir;
            PipelineOptions po;
            po.threads = threads;
            RunManifest manifest;
            {
                py::gil_scoped_release release;
                manifest = run_pipeline(cfg, po);
            }
            return manifest.to_json().dump();
        },
        py::arg("config"), py::arg("output_dir") = std::nullopt, py::arg("threads") = 1);
}
