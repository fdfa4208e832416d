#include "factornet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "factornet/error.hpp"
#include "factornet/rng.hpp"

namespace factornet {

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::Laplace: return "laplace";
        case NoiseKind::Uniform: return "uniform";
        case NoiseKind::StudentT: return "student_t";
        case NoiseKind::Gaussian: return "gaussian";
    }
    return "laplace";
}

NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "laplace") return NoiseKind::Laplace;
    if (s == "uniform") return NoiseKind::Uniform;
    if (s == "student_t" || s == "t") return NoiseKind::StudentT;
    if (s == "gaussian" || s == "normal") return NoiseKind::Gaussian;
    throw InputError("unknown noise kind '" + s + "'");
}

int Adjacency::edge_count() const {
    int count = 0;
    for (Eigen::Index i = 0; i < w0.rows(); ++i) {
        for (Eigen::Index j = 0; j < w0.cols(); ++j) count += (i != j && w0(i, j) != 0.0);
    }
    for (const auto& w : lagged) count += static_cast<int>((w.array() != 0.0).count());
    return count;
}

namespace {

bool is_dag(const Eigen::MatrixXd& w0) {
    const auto n = static_cast<std::size_t>(w0.rows());
    std::vector<int> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (w0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
                if (i == j) return false;
                ++indegree[i];
            }
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t j = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t i = 0; i < n; ++i) {
            if (w0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 && --indegree[i] == 0) {
                ready.push_back(i);
            }
        }
    }
    return visited == n;
}

double draw_noise(Rng& rng, const NoiseSpec& noise) {
    switch (noise.kind) {
        case NoiseKind::Laplace: return rng.laplace();
        case NoiseKind::Uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
        case NoiseKind::StudentT: return rng.student_t(noise.df);
        case NoiseKind::Gaussian: return rng.normal();
    }
    return rng.laplace();
}

std::vector<double> standardized(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) throw NumericalError("ordering_score: zero-variance residual");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
    return out;
}

}  // namespace

double spectral_radius(const SvarSpec& spec) {
    const Eigen::Index n = spec.n;
    const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - spec.w0).inverse();
    const Eigen::Index k = n * spec.lags;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int l = 0; l < spec.lags; ++l) companion.block(0, l * n, n, n) = inv * spec.lagged[static_cast<std::size_t>(l)];
    if (spec.lags > 1) companion.block(n, 0, k - n, k - n).setIdentity();
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

void validate(const SvarSpec& spec) {
    if (spec.n < 1 || spec.lags < 1 || spec.t < 1) throw InputError("SvarSpec: n, lags and t must be positive");
    if (spec.w0.rows() != spec.n || spec.w0.cols() != spec.n) throw InputError("SvarSpec: W0 has the wrong shape");
    if (static_cast<int>(spec.lagged.size()) != spec.lags) throw InputError("SvarSpec: need one matrix per lag");
    for (const auto& w : spec.lagged) {
        if (w.rows() != spec.n || w.cols() != spec.n) throw InputError("SvarSpec: lagged matrix has the wrong shape");
    }
    if (!spec.scales.empty() && static_cast<int>(spec.scales.size()) != spec.n) {
        throw InputError("SvarSpec: one noise scale per variable");
    }
    if (spec.noise.kind == NoiseKind::StudentT && !(spec.noise.df > 2.0)) {
        throw InputError("SvarSpec: Student t noise needs df > 2");
    }
    if (!is_dag(spec.w0)) throw InputError("SvarSpec: W0 is not acyclic");
    const Eigen::MatrixXd i_minus = Eigen::MatrixXd::Identity(spec.n, spec.n) - spec.w0;
    if (std::abs(i_minus.determinant()) < 1e-12) throw InputError("SvarSpec: I - W0 is singular");
    if (!(spectral_radius(spec) < 1.0)) throw InputError("SvarSpec: implied VAR is not stationary");
}

Simulation generate(const SvarSpec& spec) {
    validate(spec);
    const Eigen::Index n = spec.n;
    const Eigen::MatrixXd mix = (Eigen::MatrixXd::Identity(n, n) - spec.w0).inverse();
    const int total = spec.t + spec.burn_in;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, total);
    // Burn-in and kept innovations come from separate streams, so the kept draws do not depend on
    // the burn-in length.
    Rng kept(spec.seed);
    Rng warmup = Rng::stream(spec.seed, 1);
    Eigen::VectorXd e(n);
    for (int s = 0; s < total; ++s) {
        Rng& rng = s < spec.burn_in ? warmup : kept;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double scale = spec.scales.empty() ? 1.0 : spec.scales[static_cast<std::size_t>(i)];
            e(i) = scale * draw_noise(rng, spec.noise);
        }
        for (int l = 1; l <= spec.lags && l <= s; ++l) e.noalias() += spec.lagged[static_cast<std::size_t>(l - 1)] * y.col(s - l);
        y.col(s) = mix * e;
    }

    std::vector<Date> dates;
    Date d{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};
    while (static_cast<int>(dates.size()) < spec.t) {
        if (is_weekday(d)) dates.push_back(d);
        d = add_days(d, 1);
    }
    std::vector<std::string> names;
    for (int i = 0; i < spec.n; ++i) names.push_back("x" + std::to_string(i + 1));
    return Simulation{ReturnPanel(std::move(dates), std::move(names), y.rightCols(spec.t)),
                      Adjacency{spec.w0, spec.lagged}};
}

SvarSpec random_svar_spec(int n, int lags, int t, double density, NoiseSpec noise, std::uint64_t seed,
                          double max_radius) {
    if (n < 1 || lags < 1) throw InputError("random_svar_spec: n and lags must be positive");
    if (!(density >= 0.0 && density <= 1.0)) throw InputError("random_svar_spec: density outside [0, 1]");
    Rng rng(splitmix64(seed ^ 0x5eedULL));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    struct Slot {
        int lag, dst, src;
    };
    std::vector<Slot> slots;
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < q; ++p) slots.push_back({0, order[static_cast<std::size_t>(q)], order[static_cast<std::size_t>(p)]});
    }
    for (int l = 1; l <= lags; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) slots.push_back({l, i, j});
        }
    }
    for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.index(i)]);
    const auto edges = static_cast<std::size_t>(std::lround(density * static_cast<double>(slots.size())));

    SvarSpec spec;
    spec.n = n;
    spec.lags = lags;
    spec.t = t;
    spec.noise = noise;
    spec.seed = seed;
    spec.w0 = Eigen::MatrixXd::Zero(n, n);
    spec.lagged.assign(static_cast<std::size_t>(lags), Eigen::MatrixXd::Zero(n, n));
    for (std::size_t k = 0; k < edges; ++k) {
        const Slot& s = slots[k];
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        if (s.lag == 0) {
            spec.w0(s.dst, s.src) = sign * (0.3 + 0.5 * rng.uniform());
        } else {
            spec.lagged[static_cast<std::size_t>(s.lag - 1)](s.dst, s.src) = sign * (0.15 + 0.25 * rng.uniform());
        }
    }
    for (int guard = 0; guard < 200; ++guard) {
        const double radius = spectral_radius(spec);
        if (radius <= max_radius) break;
        for (auto& w : spec.lagged) w *= 0.95 * max_radius / radius;
    }
    validate(spec);
    return spec;
}

RecoveryMetrics recovery_metrics(const std::vector<EdgeKey>& estimated, const Adjacency& truth) {
    const Eigen::Index n = truth.w0.rows();
    std::set<EdgeKey> true_set;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && truth.w0(i, j) != 0.0) true_set.insert({static_cast<int>(j), static_cast<int>(i), 0});
        }
    }
    for (std::size_t l = 0; l < truth.lagged.size(); ++l) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (truth.lagged[l](i, j) != 0.0) {
                    true_set.insert({static_cast<int>(j), static_cast<int>(i), static_cast<int>(l + 1)});
                }
            }
        }
    }
    const std::set<EdgeKey> est_set(estimated.begin(), estimated.end());
    for (const auto& k : est_set) {
        if (k.src < 0 || k.dst < 0 || k.src >= n || k.dst >= n || k.lag > static_cast<int>(truth.lagged.size())) {
            throw InputError("recovery_metrics: estimated edge outside the truth's dimensions");
        }
    }

    RecoveryMetrics m;
    std::set<EdgeKey> reversed_truth;
    for (const auto& k : est_set) {
        if (true_set.count(k)) {
            ++m.true_positive;
            continue;
        }
        ++m.false_positive;
        const EdgeKey flipped{k.dst, k.src, 0};
        if (k.lag == 0 && true_set.count(flipped) && !est_set.count(flipped)) {
            ++m.reversed;
            reversed_truth.insert(flipped);
        }
    }
    m.false_negative = static_cast<int>(true_set.size()) - m.true_positive;
    const int missing = m.false_negative - static_cast<int>(reversed_truth.size());
    const int extra = m.false_positive - m.reversed;
    m.shd = missing + extra + m.reversed;
    m.precision = est_set.empty() ? 1.0 : static_cast<double>(m.true_positive) / static_cast<double>(est_set.size());
    m.recall = true_set.empty() ? 1.0 : static_cast<double>(m.true_positive) / static_cast<double>(true_set.size());
    return m;
}

RecoveryMetrics recovery_metrics(const FactorNetwork& estimated, const Adjacency& truth) {
    if (static_cast<Eigen::Index>(estimated.names.size()) != truth.w0.rows()) {
        throw InputError("recovery_metrics: dimension mismatch");
    }
    std::vector<EdgeKey> keys;
    for (const auto& e : estimated.edges) {
        if (e.significant) keys.push_back(e.key());
    }
    return recovery_metrics(keys, truth);
}

RecoveryMetrics recovery_metrics(const CausalModel& estimated, const Adjacency& truth, double threshold) {
    if (estimated.w0.rows() != truth.w0.rows() || estimated.lagged.size() != truth.lagged.size()) {
        throw InputError("recovery_metrics: dimension mismatch");
    }
    std::vector<EdgeKey> keys;
    const Eigen::Index n = estimated.w0.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && std::abs(estimated.w0(i, j)) > threshold) keys.push_back({static_cast<int>(j), static_cast<int>(i), 0});
        }
    }
    for (std::size_t l = 0; l < estimated.lagged.size(); ++l) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (std::abs(estimated.lagged[l](i, j)) > threshold) {
                    keys.push_back({static_cast<int>(j), static_cast<int>(i), static_cast<int>(l + 1)});
                }
            }
        }
    }
    return recovery_metrics(keys, truth);
}

double ordering_score(const ResidualPanel& residuals, std::span<const int> order) {
    const auto n = static_cast<std::size_t>(residuals.values.rows());
    if (order.size() != n) throw InputError("ordering_score: ordering size mismatch");
    std::vector<std::vector<double>> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::RowVectorXd row = residuals.values.row(static_cast<Eigen::Index>(i));
        data[i].assign(row.data(), row.data() + row.size());
    }
    std::vector<bool> active(n, true);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < n; ++s) {
        const auto i = static_cast<std::size_t>(order[s]);
        const auto xi = standardized(data[i]);
        const double h_xi = entropy_approx(xi);
        for (std::size_t j = 0; j < n; ++j) {
            if (!active[j] || j == i) continue;
            const auto xj = standardized(data[j]);
            const auto ri_j = standardized(pairwise_residual(xi, xj));
            const auto rj_i = standardized(pairwise_residual(xj, xi));
            const double delta = (entropy_approx(xj) + entropy_approx(ri_j)) - (h_xi + entropy_approx(rj_i));
            const double d = std::min(0.0, delta);
            total += d * d;
        }
        active[i] = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (active[j]) data[j] = pairwise_residual(data[j], data[i]);
        }
    }
    return total;
}

std::vector<int> brute_force_order(const ResidualPanel& residuals) {
    const auto n = static_cast<int>(residuals.values.rows());
    if (n < 1) throw InputError("brute_force_order: no variables");
    if (n > 6) throw InputError("brute_force_order: N = " + std::to_string(n) + " exceeds the enumeration limit of 6");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_score = std::numeric_limits<double>::infinity();
    do {
        const double score = ordering_score(residuals, perm);
        if (score < best_score) {
            best_score = score;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace factornet
