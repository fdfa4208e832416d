#include "factornet/netinfer.hpp"

#include <algorithm>
#include <cmath>

#include "factornet/error.hpp"
#include "factornet/parallel.hpp"

namespace factornet {

std::string to_string(ResampleScheme s) {
    switch (s) {
        case ResampleScheme::Residual: return "residual";
        case ResampleScheme::Rows: return "rows";
        case ResampleScheme::Block: return "block";
        case ResampleScheme::Permutation: return "permutation";
    }
    return "residual";
}

ResampleScheme parse_resample_scheme(const std::string& s) {
    if (s == "residual") return ResampleScheme::Residual;
    if (s == "rows") return ResampleScheme::Rows;
    if (s == "block") return ResampleScheme::Block;
    if (s == "permutation") return ResampleScheme::Permutation;
    throw InputError("unknown resampling scheme '" + s + "'");
}

std::vector<EdgeKey> coefficient_layout(NetworkKind kind, int n, int lags, bool include_self_lags) {
    std::vector<EdgeKey> layout;
    if (kind == NetworkKind::Causal) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) layout.push_back({j, i, 0});
            }
        }
        for (int l = 1; l <= lags; ++l) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) layout.push_back({j, i, l});
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) layout.push_back({i, j, 0});
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j || include_self_lags) layout.push_back({j, i, 1});
            }
        }
    }
    return layout;
}

Eigen::VectorXd causal_coefficients(const CausalModel& model) {
    const Eigen::Index n = model.w0.rows();
    const auto lags = static_cast<Eigen::Index>(model.lagged.size());
    Eigen::VectorXd out(n * (n - 1) + lags * n * n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) out(k++) = model.w0(i, j);
        }
    }
    for (const auto& w : model.lagged) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) out(k++) = w(i, j);
        }
    }
    return out;
}

Eigen::VectorXd correlation_coefficients(const Eigen::MatrixXd& y, bool include_self_lags) {
    const Eigen::Index n = y.rows();
    const Eigen::Index t = y.cols();
    if (t < 3) throw InputError("correlation network needs at least three observations");

    auto corr = [](const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b) {
        const Eigen::RowVectorXd da = a.array() - a.mean();
        const Eigen::RowVectorXd db = b.array() - b.mean();
        const double saa = da.squaredNorm();
        const double sbb = db.squaredNorm();
        if (!(saa > 0.0) || !(sbb > 0.0)) throw NumericalError("correlation network: zero-variance column");
        return da.dot(db) / std::sqrt(saa * sbb);
    };

    std::vector<double> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(corr(y.row(i), y.row(j)));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j && !include_self_lags) continue;
            out.push_back(corr(y.row(i).tail(t - 1), y.row(j).head(t - 1)));
        }
    }
    return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Estimator causal_estimator(int lags) {
    return [lags](const Eigen::MatrixXd& y) { return causal_coefficients(var_lingam(y, lags)); };
}

Estimator correlation_estimator(bool include_self_lags) {
    return [include_self_lags](const Eigen::MatrixXd& y) { return correlation_coefficients(y, include_self_lags); };
}

Eigen::MatrixXd resample_panel(const Eigen::MatrixXd& y, const VarModel* model, ResampleScheme scheme,
                               int block_length, Rng& rng) {
    const Eigen::Index n = y.rows();
    const Eigen::Index t = y.cols();
    Eigen::MatrixXd out(n, t);

    switch (scheme) {
        case ResampleScheme::Residual: {
            if (model == nullptr) throw InputError("residual resampling needs a fitted VAR");
            const int lags = model->lags;
            const auto m = static_cast<std::size_t>(model->residuals.cols());
            out.leftCols(lags) = y.leftCols(lags);
            for (Eigen::Index s = lags; s < t; ++s) {
                Eigen::VectorXd v = model->intercept + model->residuals.col(static_cast<Eigen::Index>(rng.index(m)));
                for (int l = 1; l <= lags; ++l) v.noalias() += model->coefficients[l - 1] * out.col(s - l);
                out.col(s) = v;
            }
            break;
        }
        case ResampleScheme::Rows: {
            const auto m = static_cast<std::size_t>(t);
            for (Eigen::Index s = 0; s < t; ++s) out.col(s) = y.col(static_cast<Eigen::Index>(rng.index(m)));
            break;
        }
        case ResampleScheme::Block: {
            const Eigen::Index b = std::clamp<Eigen::Index>(block_length, 1, t);
            const auto starts = static_cast<std::size_t>(t - b + 1);
            for (Eigen::Index s = 0; s < t;) {
                const auto begin = static_cast<Eigen::Index>(rng.index(starts));
                const Eigen::Index len = std::min(b, t - s);
                out.middleCols(s, len) = y.middleCols(begin, len);
                s += len;
            }
            break;
        }
        case ResampleScheme::Permutation: {
            for (Eigen::Index i = 0; i < n; ++i) {
                std::vector<Eigen::Index> idx(static_cast<std::size_t>(t));
                for (Eigen::Index s = 0; s < t; ++s) idx[static_cast<std::size_t>(s)] = s;
                for (std::size_t s = idx.size(); s > 1; --s) std::swap(idx[s - 1], idx[rng.index(s)]);
                for (Eigen::Index s = 0; s < t; ++s) out(i, s) = y(i, idx[static_cast<std::size_t>(s)]);
            }
            break;
        }
    }
    return out;
}

ResampleDraws draw_resamples(const Eigen::MatrixXd& y, int model_lags, const Estimator& estimator,
                             const ResampleOptions& options) {
    if (options.replicates < 1) throw InputError("resampling needs at least one replicate");

    std::optional<VarModel> model;
    if (options.scheme == ResampleScheme::Residual) model = fit_var(y, std::max(1, model_lags));

    const auto b_count = static_cast<std::size_t>(options.replicates);
    std::vector<Eigen::VectorXd> results(b_count);
    std::vector<char> ok(b_count, 0);
    parallel_for(b_count, options.threads, [&](std::size_t b) {
        Rng rng = Rng::stream(options.seed, b);
        const Eigen::MatrixXd sample =
            resample_panel(y, model ? &*model : nullptr, options.scheme, options.block_length, rng);
        try {
            results[b] = estimator(sample);
            ok[b] = results[b].allFinite() ? 1 : 0;
        } catch (const Error&) {
            ok[b] = 0;
        }
    });

    ResampleDraws draws;
    draws.requested = b_count;
    const auto good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    draws.failed = b_count - good;
    if (static_cast<double>(draws.failed) > options.max_failure_rate * static_cast<double>(b_count)) {
        throw NumericalError("resampling: estimator failed on " + std::to_string(draws.failed) + " of " +
                             std::to_string(b_count) + " replicates");
    }
    if (good == 0) throw NumericalError("resampling: no successful replicate");
    const Eigen::Index p = results[static_cast<std::size_t>(std::find(ok.begin(), ok.end(), 1) - ok.begin())].size();
    draws.draws.resize(static_cast<Eigen::Index>(good), p);
    Eigen::Index row = 0;
    for (std::size_t b = 0; b < b_count; ++b) {
        if (ok[b]) draws.draws.row(row++) = results[b].transpose();
    }
    return draws;
}

EdgeSignificance significance_from_draws(const std::vector<EdgeKey>& layout, const Eigen::VectorXd& point,
                                         const ResampleDraws& draws, double alpha, ResampleScheme scheme,
                                         QuantileMethod method) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (static_cast<Eigen::Index>(layout.size()) != point.size() || draws.draws.cols() != point.size()) {
        throw InputError("significance_from_draws: coefficient count mismatch");
    }
    EdgeSignificance sig;
    sig.replicates = static_cast<std::size_t>(draws.draws.rows());
    sig.failed = draws.failed;
    std::vector<double> column(static_cast<std::size_t>(draws.draws.rows()));
    for (Eigen::Index c = 0; c < point.size(); ++c) {
        for (Eigen::Index r = 0; r < draws.draws.rows(); ++r) column[static_cast<std::size_t>(r)] = draws.draws(r, c);
        std::sort(column.begin(), column.end());
        CoefficientBounds cb;
        cb.key = layout[static_cast<std::size_t>(c)];
        cb.point = point(c);
        cb.lower = quantile_sorted(column, alpha / 2.0, method);
        cb.upper = quantile_sorted(column, 1.0 - alpha / 2.0, method);
        if (scheme == ResampleScheme::Permutation) {
            cb.keep = cb.point < cb.lower || cb.point > cb.upper;
        } else {
            cb.keep = cb.lower > 0.0 || cb.upper < 0.0;
        }
        sig.coefficients.push_back(cb);
    }
    return sig;
}

namespace {

struct Estimate {
    std::vector<EdgeKey> layout;
    Eigen::VectorXd point;
    Estimator estimator;
    int model_lags = 1;
    std::vector<int> order;
};

Estimate point_estimate(const ReturnPanel& slice, NetworkKind kind, int lags, const ResampleOptions& options) {
    const int n = static_cast<int>(slice.n_factors());
    Estimate e;
    if (kind == NetworkKind::Causal) {
        if (lags < 1) throw InputError("causal network needs lags >= 1");
        const CausalModel model = var_lingam(slice, lags);
        e.layout = coefficient_layout(kind, n, lags);
        e.point = causal_coefficients(model);
        e.estimator = causal_estimator(lags);
        e.model_lags = lags;
        e.order = model.order;
    } else {
        e.layout = coefficient_layout(kind, n, 1, options.include_self_lags);
        e.point = correlation_coefficients(slice.values(), options.include_self_lags);
        e.estimator = correlation_estimator(options.include_self_lags);
        e.model_lags = std::max(1, lags);
    }
    return e;
}

FactorNetwork build_network(const ReturnPanel& slice, NetworkKind kind, int lags, const ResampleOptions& options,
                            std::optional<WindowSpec> window) {
    const Estimate e = point_estimate(slice, kind, lags, options);
    const ResampleDraws draws = draw_resamples(slice.values(), e.model_lags, e.estimator, options);
    const EdgeSignificance sig =
        significance_from_draws(e.layout, e.point, draws, options.alpha, options.scheme, options.quantile);

    FactorNetwork net;
    net.window = window;
    net.kind = kind;
    net.names = slice.names();
    net.lags = kind == NetworkKind::Causal ? lags : 1;
    net.alpha = options.alpha;
    net.order = e.order;
    for (const auto& c : sig.coefficients) {
        net.edges.push_back(Edge{c.key.src, c.key.dst, c.key.lag, c.point, c.keep, c.lower, c.upper});
    }
    return net;
}

}  // namespace

EdgeSignificance resample_significance(const ReturnPanel& slice, NetworkKind kind, int lags,
                                       const ResampleOptions& options) {
    const Estimate e = point_estimate(slice, kind, lags, options);
    const ResampleDraws draws = draw_resamples(slice.values(), e.model_lags, e.estimator, options);
    return significance_from_draws(e.layout, e.point, draws, options.alpha, options.scheme, options.quantile);
}

FactorNetwork causal_network(const ReturnPanel& slice, int lags, const ResampleOptions& options,
                             std::optional<WindowSpec> window) {
    return build_network(slice, NetworkKind::Causal, lags, options, window);
}

FactorNetwork correlation_network(const ReturnPanel& slice, const ResampleOptions& options,
                                  std::optional<WindowSpec> window) {
    return build_network(slice, NetworkKind::Correlation, 1, options, window);
}

}  // namespace factornet
