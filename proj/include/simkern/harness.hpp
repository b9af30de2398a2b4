#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/forest.hpp"
#include "simkern/learners.hpp"
#include "simkern/randspec.hpp"
#include "simkern/rng.hpp"
#include "simkern/svm.hpp"

namespace simkern {

struct HyperParams {
    std::optional<double> c;        // SVM: > 0
    std::optional<double> gamma;    // RBF only: > 0
    std::optional<double> eps;      // SVM regression only: [0,1]
    std::optional<int> n_feat;      // RF: [1, p]
    std::optional<int> n_splits;    // RF: [1, n-1]

    std::string to_string() const {
        std::ostringstream os;
        const char* sep = "";
        auto emit = [&](const char* name, double v) {
            os << sep << name << "=" << format_double(v);
            sep = ";";
        };
        if (c) emit("C", *c);
        if (gamma) emit("gamma", *gamma);
        if (eps) emit("eps", *eps);
        if (n_feat) emit("n_feat", *n_feat);
        if (n_splits) emit("n_splits", *n_splits);
        return os.str();
    }
};

struct SplitIndices {
    std::vector<int> train, validation, test;
};

struct ResultRecord {
    int repetition = 0;
    double subsample = 1.0;
    std::string algorithm;
    std::string hyperparams;
    double val_metric = 0.0;
    double test_metric = 0.0;
};

struct ExperimentConfig {
    int repetitions = 10;
    std::array<double, 3> fractions{0.5, 0.25, 0.25};
    std::vector<double> subsample_schedule;
    std::vector<std::string> algorithms;  // roster order fixes tie-breaking
    std::uint64_t master_seed = 0;
    bool strict_scaling = false;  // scale with training statistics only
    int workers = 1;
};

inline std::vector<std::string> default_roster() {
    return {"linear_svm", "rbf_svm", "rf", "nn", "simkern_svm", "simkern_rf", "simkern_nn"};
}

namespace detail {

// Largest-remainder allocation of `count` items over `fractions`; ties in
// the remainders break toward the lower part index.
inline std::vector<int> largest_remainder(int count, const std::vector<double>& fractions) {
    std::vector<int> alloc(fractions.size());
    std::vector<double> rem(fractions.size());
    int assigned = 0;
    for (std::size_t k = 0; k < fractions.size(); ++k) {
        double target = count * fractions[k];
        alloc[k] = static_cast<int>(std::floor(target));
        rem[k] = target - alloc[k];
        assigned += alloc[k];
    }
    for (int left = count - assigned; left > 0; --left) {
        std::size_t pick = 0;
        for (std::size_t k = 1; k < fractions.size(); ++k)
            if (rem[k] > rem[pick]) pick = k;
        ++alloc[pick];
        rem[pick] = -1.0;
    }
    return alloc;
}

}  // namespace detail

// Classification: per class, shuffle then allocate the three parts by
// largest-remainder rounding. Regression falls back to an unstratified
// random split.
inline SplitIndices stratified_split(const std::vector<double>& y, Task task,
                                     const std::array<double, 3>& fractions,
                                     std::uint64_t seed) {
    std::vector<double> fr(fractions.begin(), fractions.end());
    SplitIndices out;
    auto place = [&](const std::vector<int>& members, const std::vector<int>& alloc) {
        std::size_t pos = 0;
        for (int part = 0; part < 3; ++part) {
            auto* dst = part == 0 ? &out.train : part == 1 ? &out.validation : &out.test;
            for (int k = 0; k < alloc[static_cast<std::size_t>(part)]; ++k)
                dst->push_back(members[pos++]);
        }
    };
    if (task == Task::classification) {
        std::map<int, std::vector<int>> by_class;
        for (std::size_t i = 0; i < y.size(); ++i)
            by_class[static_cast<int>(y[i])].push_back(static_cast<int>(i));
        int nonzero_parts = 0;
        for (double f : fr)
            if (f > 0.0) ++nonzero_parts;
        for (auto& [label, members] : by_class) {
            if (static_cast<int>(members.size()) < nonzero_parts)
                throw ClassTooSmall("class " + std::to_string(label) + " has only " +
                                    std::to_string(members.size()) + " members");
            Rng rng = Rng::from_path(seed, {hash_str("split"), static_cast<std::uint64_t>(label)});
            rng.shuffle(members);
            place(members, detail::largest_remainder(static_cast<int>(members.size()), fr));
        }
    } else {
        std::vector<int> all(y.size());
        std::iota(all.begin(), all.end(), 0);
        Rng rng = Rng::from_path(seed, {hash_str("split")});
        rng.shuffle(all);
        place(all, detail::largest_remainder(static_cast<int>(all.size()), fr));
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validation.begin(), out.validation.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

// Stratified subsample of size round(s * |train|) with at least one member
// per represented class.
inline std::vector<int> subsample_training(const std::vector<int>& train,
                                           const std::vector<double>& y, Task task, double s,
                                           std::uint64_t seed) {
    if (s >= 1.0) return train;
    int m = static_cast<int>(std::lround(s * static_cast<double>(train.size())));
    if (m < 1) m = 1;
    std::vector<int> out;
    if (task == Task::classification) {
        std::map<int, std::vector<int>> by_class;
        for (int i : train) by_class[static_cast<int>(y[static_cast<std::size_t>(i)])].push_back(i);
        std::vector<double> props;
        for (auto& [label, members] : by_class)
            props.push_back(static_cast<double>(members.size()) /
                            static_cast<double>(train.size()));
        std::vector<int> quota = detail::largest_remainder(m, props);
        std::size_t k = 0;
        for (auto& [label, members] : by_class) {
            int q = std::max(quota[k++], 1);
            q = std::min(q, static_cast<int>(members.size()));
            std::vector<int> pick = members;
            Rng rng =
                Rng::from_path(seed, {hash_str("subsample"), static_cast<std::uint64_t>(label)});
            rng.shuffle(pick);
            out.insert(out.end(), pick.begin(), pick.begin() + q);
        }
    } else {
        std::vector<int> pick = train;
        Rng rng = Rng::from_path(seed, {hash_str("subsample")});
        rng.shuffle(pick);
        out.assign(pick.begin(), pick.begin() + std::max(m, 1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Hyperparameter grids: C in {1e-12..1e12} (25), gamma in {1e-15..1e1}
// (17), eps in {1e-5..1e-1, .25, .5, .75, 1} (9, regression only), n_feat
// in {1, (1+sqrt p)/2, sqrt p, (sqrt p + p)/2, p} floored and deduplicated,
// n_splits in {.05,.1,.2,.3,.4,.5,.75,1}*n floored, clamped to [1, n-1]
// and deduplicated.
inline std::vector<double> c_grid() {
    std::vector<double> g;
    for (int k = -12; k <= 12; ++k) g.push_back(std::pow(10.0, k));
    return g;
}
inline std::vector<double> gamma_grid() {
    std::vector<double> g;
    for (int k = -15; k <= 1; ++k) g.push_back(std::pow(10.0, k));
    return g;
}
inline std::vector<double> eps_grid() {
    return {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.25, 0.5, 0.75, 1.0};
}
inline std::vector<int> n_feat_grid(int p) {
    double sq = std::sqrt(static_cast<double>(p));
    std::vector<int> raw = {1, static_cast<int>(std::floor((1.0 + sq) / 2.0)),
                            static_cast<int>(std::floor(sq)),
                            static_cast<int>(std::floor((sq + p) / 2.0)), p};
    std::vector<int> g;
    for (int v : raw)
        if (std::find(g.begin(), g.end(), v) == g.end()) g.push_back(v);
    return g;
}
inline std::vector<int> n_splits_grid(int n) {
    std::vector<int> g;
    for (double f : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0}) {
        int v = static_cast<int>(std::floor(f * n));
        v = std::max(1, std::min(v, n - 1));
        if (std::find(g.begin(), g.end(), v) == g.end()) g.push_back(v);
    }
    return g;
}

inline bool is_svm(const std::string& algorithm) {
    return algorithm == "linear_svm" || algorithm == "rbf_svm" || algorithm == "simkern_svm";
}
inline bool is_forest(const std::string& algorithm) {
    return algorithm == "rf" || algorithm == "simkern_rf";
}
inline bool is_nn(const std::string& algorithm) {
    return algorithm == "nn" || algorithm == "simkern_nn";
}

inline std::vector<HyperParams> build_grid(const std::string& algorithm, int n, int p, Task task) {
    std::vector<HyperParams> grid;
    if (is_svm(algorithm)) {
        for (double c : c_grid()) {
            std::vector<double> gammas =
                algorithm == "rbf_svm" ? gamma_grid() : std::vector<double>{0.0};
            for (double g : gammas) {
                std::vector<double> epss =
                    task == Task::regression ? eps_grid() : std::vector<double>{0.0};
                for (double e : epss) {
                    HyperParams hp;
                    hp.c = c;
                    if (algorithm == "rbf_svm") hp.gamma = g;
                    if (task == Task::regression) hp.eps = e;
                    grid.push_back(hp);
                }
            }
        }
    } else if (is_forest(algorithm)) {
        for (int nf : n_feat_grid(p))
            for (int ns : n_splits_grid(n)) {
                HyperParams hp;
                hp.n_feat = nf;
                hp.n_splits = ns;
                grid.push_back(hp);
            }
    } else if (is_nn(algorithm)) {
        grid.push_back({});
    } else {
        throw ConfigError("unknown algorithm `" + algorithm + "`");
    }
    return grid;
}

namespace detail {

inline Matrix slice_rows(const Matrix& x, const std::vector<int>& rows) {
    Matrix out(rows.size(), x.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            out(r, c) = x(static_cast<std::size_t>(rows[r]), c);
    return out;
}

inline Matrix slice_kernel(const Matrix& k, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(r, c) = k(static_cast<std::size_t>(rows[r]), static_cast<std::size_t>(cols[c]));
    return out;
}

inline std::vector<double> gather(const std::vector<double>& y, const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(y[static_cast<std::size_t>(i)]);
    return out;
}

// Fit one algorithm with one hyperparameter configuration and return its
// predictions on the evaluation rows. Kernelized algorithms index the
// precomputed kernel by the split indices.
struct FitContext {
    const Matrix* x_svm;       // scaled + one-hot features
    const Matrix* x_rf;        // raw features
    const Matrix* kernel;      // N x N precomputed similarity, may be null
    const std::vector<double>* y;
    Task task;
};

inline std::vector<double> fit_and_predict(const FitContext& ctx, const std::string& algorithm,
                                           const HyperParams& hp, const std::vector<int>& train,
                                           const std::vector<int>& eval, std::uint64_t fit_seed) {
    const std::vector<double> y_train = gather(*ctx.y, train);
    std::vector<double> preds;
    preds.reserve(eval.size());

    if (is_svm(algorithm)) {
        Matrix k_train;
        if (algorithm == "simkern_svm") {
            if (!ctx.kernel) throw KernelNotFound("simkern_svm requires a precomputed kernel");
            k_train = slice_kernel(*ctx.kernel, train, train);
        } else {
            KernelSpec spec = algorithm == "rbf_svm" ? KernelSpec::rbf(*hp.gamma)
                                                     : KernelSpec::linear();
            k_train = compute_gram(slice_rows(*ctx.x_svm, train), spec);
        }
        // numerically symmetrize before solving
        for (std::size_t i = 0; i < k_train.rows(); ++i)
            for (std::size_t j = i + 1; j < k_train.cols(); ++j) {
                double v = 0.5 * (k_train(i, j) + k_train(j, i));
                k_train(i, j) = v;
                k_train(j, i) = v;
            }
        auto kernel_row = [&](int row) {
            if (algorithm == "simkern_svm")
                return slice_kernel(*ctx.kernel, {row}, train).row(0);
            KernelSpec spec = algorithm == "rbf_svm" ? KernelSpec::rbf(*hp.gamma)
                                                     : KernelSpec::linear();
            std::vector<double> out(train.size());
            for (std::size_t s = 0; s < train.size(); ++s)
                out[s] = kernel_value(spec,
                                      ctx.x_svm->row_ptr(static_cast<std::size_t>(train[s])),
                                      ctx.x_svm->row_ptr(static_cast<std::size_t>(row)),
                                      ctx.x_svm->cols());
            return out;
        };
        if (ctx.task == Task::classification) {
            std::vector<int> labels(y_train.size());
            for (std::size_t i = 0; i < y_train.size(); ++i)
                labels[i] = static_cast<int>(y_train[i]);
            SvmModel model = train_svc_gram(k_train, labels, *hp.c);
            for (int e : eval) preds.push_back(predict_svc_row(model, kernel_row(e)));
        } else {
            SvmModel model = train_svr_gram(k_train, y_train, *hp.c, *hp.eps);
            for (int e : eval) preds.push_back(predict_svr_row(model, kernel_row(e)));
        }
        return preds;
    }

    if (is_forest(algorithm)) {
        Matrix x_train = algorithm == "simkern_rf" ? slice_kernel(*ctx.kernel, train, train)
                                                   : slice_rows(*ctx.x_rf, train);
        auto task = ctx.task == Task::classification ? ForestModel::Task::classification
                                                     : ForestModel::Task::regression;
        ForestModel model = train_forest(x_train, y_train, *hp.n_feat, *hp.n_splits, task,
                                         fit_seed);
        for (int e : eval) {
            std::vector<double> row = algorithm == "simkern_rf"
                                          ? slice_kernel(*ctx.kernel, {e}, train).row(0)
                                          : ctx.x_rf->row(static_cast<std::size_t>(e));
            preds.push_back(predict_forest(model, row));
        }
        return preds;
    }

    // nearest neighbor
    if (algorithm == "simkern_nn") {
        if (!ctx.kernel) throw KernelNotFound("simkern_nn requires a precomputed kernel");
        for (int e : eval)
            preds.push_back(simkern_nn_predict(slice_kernel(*ctx.kernel, {e}, train).row(0),
                                               y_train));
    } else {
        Matrix x_train = slice_rows(*ctx.x_svm, train);
        for (int e : eval)
            preds.push_back(
                nn_predict(x_train, y_train, ctx.x_svm->row_ptr(static_cast<std::size_t>(e))));
    }
    return preds;
}

inline double metric_value(Task task, const std::vector<double>& y,
                           const std::vector<double>& y_hat) {
    return task == Task::classification ? accuracy(y, y_hat) : r_squared(y, y_hat);
}

}  // namespace detail

// The full experimental loop: repetition -> split -> subsample ->
// algorithm -> hyperparameter grid, best configuration by validation
// metric (ties toward the first grid entry), then one test-set metric per
// record. Per-fit seeds are keyed hashes of (master seed, repetition,
// subsample index, algorithm, grid index) so work items are independent
// and worker count cannot change any result.
inline std::vector<ResultRecord> run_experiment(const Dataset& data, const Matrix* kernel,
                                                const ExperimentConfig& cfg) {
    if (kernel && kernel->rows() != data.n())
        throw SizeMismatch("kernel size does not match dataset");

    // full-dataset preprocessing up front, matching the reference
    // procedure; strict mode defers scaling statistics to each training set
    Matrix x_hot = one_hot(data.x, data.kinds);
    Matrix x_svm = cfg.strict_scaling ? x_hot : scale_features(x_hot);

    struct WorkItem {
        int rep;
        std::size_t s_index;
        std::size_t alg_index;
    };
    std::vector<WorkItem> items;
    for (int rep = 0; rep < cfg.repetitions; ++rep)
        for (std::size_t si = 0; si < cfg.subsample_schedule.size(); ++si)
            for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
                items.push_back({rep, si, ai});

    std::vector<ResultRecord> records(items.size());

    auto run_item = [&](const WorkItem& item) {
        const std::string& algorithm = cfg.algorithms[item.alg_index];
        const double s = cfg.subsample_schedule[item.s_index];

        SplitIndices split = stratified_split(
            data.y, data.task, cfg.fractions,
            derive_seed(cfg.master_seed, {hash_str("split"),
                                          static_cast<std::uint64_t>(item.rep)}));
        std::vector<int> sub = subsample_training(
            split.train, data.y, data.task, s,
            derive_seed(cfg.master_seed, {hash_str("subsample"),
                                          static_cast<std::uint64_t>(item.rep), item.s_index}));

        Matrix x_svm_local = x_svm;
        if (cfg.strict_scaling) {
            FeatureScaler scaler = FeatureScaler::fit(detail::slice_rows(x_hot, sub));
            x_svm_local = scaler.transform(x_hot);
        }
        detail::FitContext ctx{&x_svm_local, &data.x, kernel, &data.y, data.task};

        int p_alg = static_cast<int>(algorithm == "simkern_rf" ? sub.size()
                                     : is_forest(algorithm)    ? data.p()
                                                               : x_svm_local.cols());
        std::vector<HyperParams> grid =
            build_grid(algorithm, static_cast<int>(sub.size()), p_alg, data.task);

        const std::vector<double> y_val = detail::gather(data.y, split.validation);
        const std::vector<double> y_test = detail::gather(data.y, split.test);

        double best_val = -std::numeric_limits<double>::infinity();
        std::size_t best_g = 0;
        bool any_ok = false;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::uint64_t fit_seed =
                derive_seed(cfg.master_seed, {hash_str(algorithm),
                                              static_cast<std::uint64_t>(item.rep), item.s_index,
                                              g});
            double val;
            try {
                val = detail::metric_value(
                    data.task, y_val,
                    detail::fit_and_predict(ctx, algorithm, grid[g], sub, split.validation,
                                            fit_seed));
            } catch (const std::exception&) {
                continue;  // failed grid points score -inf
            }
            if (!any_ok || val > best_val) {
                best_val = val;
                best_g = g;
                any_ok = true;
            }
        }

        ResultRecord rec;
        rec.repetition = item.rep;
        rec.subsample = s;
        rec.algorithm = algorithm;
        if (any_ok) {
            rec.hyperparams = grid[best_g].to_string();
            rec.val_metric = best_val;
            std::uint64_t fit_seed =
                derive_seed(cfg.master_seed, {hash_str(algorithm),
                                              static_cast<std::uint64_t>(item.rep), item.s_index,
                                              best_g});
            rec.test_metric = detail::metric_value(
                data.task, y_test,
                detail::fit_and_predict(ctx, algorithm, grid[best_g], sub, split.test, fit_seed));
        } else {
            rec.hyperparams = "none";
            rec.val_metric = -std::numeric_limits<double>::infinity();
            rec.test_metric = std::numeric_limits<double>::quiet_NaN();
        }
        return rec;
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t w = 0; w < items.size(); ++w) records[w] = run_item(items[w]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < items.size(); k = next.fetch_add(1))
                    records[k] = run_item(items[k]);
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

// Quantiles with linear interpolation between order statistics.
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

struct BoxplotRow {
    std::string algorithm;
    double subsample = 0.0;
    double median = 0.0, q1 = 0.0, q3 = 0.0;
    double whisker_lo = 0.0, whisker_hi = 0.0;
    std::vector<double> outliers;  // outside [q1 - 1.5 IQR, q3 + 1.5 IQR]
};

inline std::vector<BoxplotRow> summarize_boxplot(const std::vector<ResultRecord>& records,
                                                 const std::vector<std::string>& roster,
                                                 const std::vector<double>& schedule) {
    std::vector<BoxplotRow> rows;
    for (const auto& algorithm : roster) {
        for (double s : schedule) {
            std::vector<double> vals;
            for (const auto& r : records)
                if (r.algorithm == algorithm && r.subsample == s &&
                    std::isfinite(r.test_metric))
                    vals.push_back(r.test_metric);
            if (vals.empty()) continue;
            BoxplotRow row;
            row.algorithm = algorithm;
            row.subsample = s;
            row.median = quantile(vals, 0.5);
            row.q1 = quantile(vals, 0.25);
            row.q3 = quantile(vals, 0.75);
            double iqr = row.q3 - row.q1;
            double lo_fence = row.q1 - 1.5 * iqr, hi_fence = row.q3 + 1.5 * iqr;
            std::sort(vals.begin(), vals.end());
            bool have_inlier = false;
            for (double v : vals) {
                if (v < lo_fence || v > hi_fence) {
                    row.outliers.push_back(v);
                } else if (!have_inlier) {
                    row.whisker_lo = row.whisker_hi = v;
                    have_inlier = true;
                } else {
                    row.whisker_hi = v;
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

struct SelectBestResult {
    std::string algorithm;
    std::vector<std::pair<double, double>> median_line;  // (s, median)
};

// The group winner is the algorithm that most frequently has the highest
// median test metric across the subsample schedule, NN excluded; ties go
// to roster order.
inline SelectBestResult select_best(const std::vector<ResultRecord>& records,
                                    const std::string& group,
                                    const std::vector<std::string>& roster,
                                    const std::vector<double>& schedule) {
    std::vector<std::string> candidates;
    for (const auto& algorithm : roster) {
        if (is_nn(algorithm)) continue;
        bool simkern = algorithm.rfind("simkern_", 0) == 0;
        if ((group == "simkern") == simkern) candidates.push_back(algorithm);
    }
    if (candidates.empty()) throw ConfigError("no candidate algorithms in group " + group);

    auto median_of = [&](const std::string& algorithm, double s) -> std::optional<double> {
        std::vector<double> vals;
        for (const auto& r : records)
            if (r.algorithm == algorithm && r.subsample == s && std::isfinite(r.test_metric))
                vals.push_back(r.test_metric);
        if (vals.empty()) return std::nullopt;
        return quantile(vals, 0.5);
    };

    std::map<std::string, int> wins;
    for (double s : schedule) {
        std::string best;
        double best_med = -std::numeric_limits<double>::infinity();
        for (const auto& algorithm : candidates) {
            auto med = median_of(algorithm, s);
            if (med && *med > best_med) {
                best_med = *med;
                best = algorithm;
            }
        }
        if (!best.empty()) ++wins[best];
    }
    SelectBestResult out;
    int best_wins = -1;
    for (const auto& algorithm : candidates) {
        auto it = wins.find(algorithm);
        int w = it == wins.end() ? 0 : it->second;
        if (w > best_wins) {
            best_wins = w;
            out.algorithm = algorithm;
        }
    }
    for (double s : schedule) {
        auto med = median_of(out.algorithm, s);
        if (med) out.median_line.emplace_back(s, *med);
    }
    return out;
}

}  // namespace simkern
