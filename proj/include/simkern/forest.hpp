#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <vector>

#include "simkern/matrix.hpp"
#include "simkern/rng.hpp"

namespace simkern {

// Random forest: 100 trees on bootstrap resamples, n_feat features sampled
// without replacement at each split, best split by Gini decrease
// (classification) or variance reduction (regression) over midpoints of
// sorted unique values, at most n_splits splits per tree.
struct ForestModel {
    enum class Task { classification, regression };

    struct Node {
        bool is_leaf = true;
        int feature = -1;
        double threshold = 0.0;
        int left = -1, right = -1;
        double prediction = 0.0;
    };

    struct Tree {
        std::vector<Node> nodes;

        double predict(const double* x) const {
            int cur = 0;
            while (!nodes[static_cast<std::size_t>(cur)].is_leaf) {
                const Node& nd = nodes[static_cast<std::size_t>(cur)];
                cur = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
            }
            return nodes[static_cast<std::size_t>(cur)].prediction;
        }
    };

    Task task = Task::classification;
    std::vector<Tree> trees;
};

struct ForestOptions {
    int n_trees = 100;
    bool bootstrap = true;
};

namespace detail {

inline double gini(const std::map<int, int>& counts, int total) {
    double g = 1.0;
    for (auto& [label, cnt] : counts) {
        double p = static_cast<double>(cnt) / total;
        g -= p * p;
    }
    return g;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
};

// Weighted impurity decrease of the best midpoint split on `feature` for
// the rows in `idx`. Ties between candidates break toward the lower
// feature index, then the lower threshold, so the search is content-based
// and independent of sampling order.
inline void consider_feature(const Matrix& x, const std::vector<double>& y,
                             const std::vector<int>& idx, int feature, bool classification,
                             SplitChoice& best) {
    std::vector<int> order(idx);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return x(static_cast<std::size_t>(a), static_cast<std::size_t>(feature)) <
               x(static_cast<std::size_t>(b), static_cast<std::size_t>(feature));
    });
    const int n = static_cast<int>(order.size());

    if (classification) {
        std::map<int, int> right_counts, left_counts;
        for (int i : order) ++right_counts[static_cast<int>(y[static_cast<std::size_t>(i)])];
        double parent = gini(right_counts, n) * n;
        int n_left = 0;
        for (int k = 0; k + 1 < n; ++k) {
            int i = order[static_cast<std::size_t>(k)];
            int label = static_cast<int>(y[static_cast<std::size_t>(i)]);
            ++left_counts[label];
            if (--right_counts[label] == 0) right_counts.erase(label);
            ++n_left;
            double v = x(static_cast<std::size_t>(i), static_cast<std::size_t>(feature));
            double v_next = x(static_cast<std::size_t>(order[static_cast<std::size_t>(k + 1)]),
                              static_cast<std::size_t>(feature));
            if (v == v_next) continue;
            double score = parent - gini(left_counts, n_left) * n_left -
                           gini(right_counts, n - n_left) * (n - n_left);
            double thr = 0.5 * (v + v_next);
            if (score > best.score ||
                (score == best.score && best.found &&
                 (feature < best.feature || (feature == best.feature && thr < best.threshold)))) {
                best = {true, feature, thr, score};
            }
        }
    } else {
        double sum_r = 0.0, sumsq_r = 0.0;
        for (int i : order) {
            double v = y[static_cast<std::size_t>(i)];
            sum_r += v;
            sumsq_r += v * v;
        }
        double parent = sumsq_r - sum_r * sum_r / n;
        double sum_l = 0.0, sumsq_l = 0.0;
        int n_left = 0;
        for (int k = 0; k + 1 < n; ++k) {
            int i = order[static_cast<std::size_t>(k)];
            double yv = y[static_cast<std::size_t>(i)];
            sum_l += yv;
            sumsq_l += yv * yv;
            sum_r -= yv;
            sumsq_r -= yv * yv;
            ++n_left;
            double v = x(static_cast<std::size_t>(i), static_cast<std::size_t>(feature));
            double v_next = x(static_cast<std::size_t>(order[static_cast<std::size_t>(k + 1)]),
                              static_cast<std::size_t>(feature));
            if (v == v_next) continue;
            double sse_l = sumsq_l - sum_l * sum_l / n_left;
            double sse_r = sumsq_r - sum_r * sum_r / (n - n_left);
            double score = parent - sse_l - sse_r;
            double thr = 0.5 * (v + v_next);
            if (score > best.score ||
                (score == best.score && best.found &&
                 (feature < best.feature || (feature == best.feature && thr < best.threshold)))) {
                best = {true, feature, thr, score};
            }
        }
    }
}

inline double leaf_prediction(const std::vector<double>& y, const std::vector<int>& idx,
                              bool classification) {
    if (classification) {
        std::map<int, int> counts;
        for (int i : idx) ++counts[static_cast<int>(y[static_cast<std::size_t>(i)])];
        int best_label = counts.begin()->first, best_count = 0;
        for (auto& [label, cnt] : counts)  // map order: ties -> lowest label
            if (cnt > best_count) {
                best_label = label;
                best_count = cnt;
            }
        return best_label;
    }
    double s = 0.0;
    for (int i : idx) s += y[static_cast<std::size_t>(i)];
    return s / static_cast<double>(idx.size());
}

inline bool node_pure(const std::vector<double>& y, const std::vector<int>& idx) {
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (y[static_cast<std::size_t>(idx[k])] != y[static_cast<std::size_t>(idx[0])])
            return false;
    return true;
}

inline ForestModel::Tree grow_tree(const Matrix& x, const std::vector<double>& y,
                                   const std::vector<int>& sample, int n_feat, int n_splits,
                                   bool classification, Rng& rng) {
    ForestModel::Tree tree;
    struct Pending {
        int node;
        std::vector<int> idx;
    };
    std::deque<Pending> queue;
    tree.nodes.push_back({});
    queue.push_back({0, sample});
    int splits_left = n_splits;

    const int p = static_cast<int>(x.cols());
    std::vector<int> all_features(static_cast<std::size_t>(p));
    std::iota(all_features.begin(), all_features.end(), 0);

    while (!queue.empty()) {
        Pending cur = std::move(queue.front());
        queue.pop_front();
        auto finish_leaf = [&] {
            tree.nodes[static_cast<std::size_t>(cur.node)].prediction =
                leaf_prediction(y, cur.idx, classification);
        };
        if (splits_left <= 0 || cur.idx.size() < 2 || node_pure(y, cur.idx)) {
            finish_leaf();
            continue;
        }
        std::vector<int> feats(all_features);
        rng.shuffle(feats);
        feats.resize(static_cast<std::size_t>(std::min(n_feat, p)));
        std::sort(feats.begin(), feats.end());

        SplitChoice best;
        for (int f : feats) consider_feature(x, y, cur.idx, f, classification, best);
        if (!best.found) {
            finish_leaf();
            continue;
        }
        --splits_left;
        std::vector<int> left_idx, right_idx;
        for (int i : cur.idx) {
            if (x(static_cast<std::size_t>(i), static_cast<std::size_t>(best.feature)) <=
                best.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        const int left_node = static_cast<int>(tree.nodes.size());
        const int right_node = left_node + 1;
        tree.nodes.push_back({});
        tree.nodes.push_back({});
        // take the reference only after both push_backs can no longer move the storage
        ForestModel::Node& nd = tree.nodes[static_cast<std::size_t>(cur.node)];
        nd.is_leaf = false;
        nd.feature = best.feature;
        nd.threshold = best.threshold;
        nd.left = left_node;
        nd.right = right_node;
        queue.push_back({left_node, std::move(left_idx)});
        queue.push_back({right_node, std::move(right_idx)});
    }
    return tree;
}

}  // namespace detail

inline ForestModel train_forest(const Matrix& x, const std::vector<double>& y, int n_feat,
                                int n_splits, ForestModel::Task task, std::uint64_t seed,
                                const ForestOptions& opt = {}) {
    const int n = static_cast<int>(x.rows());
    const bool classification = task == ForestModel::Task::classification;

    // canonical row order by content so training is invariant under
    // permutation of the input rows
    std::vector<int> canon(static_cast<std::size_t>(n));
    std::iota(canon.begin(), canon.end(), 0);
    std::sort(canon.begin(), canon.end(), [&](int a, int b) {
        auto ra = static_cast<std::size_t>(a), rb = static_cast<std::size_t>(b);
        for (std::size_t c = 0; c < x.cols(); ++c) {
            if (x(ra, c) != x(rb, c)) return x(ra, c) < x(rb, c);
        }
        return y[ra] < y[rb];
    });

    ForestModel model;
    model.task = task;
    model.trees.reserve(static_cast<std::size_t>(opt.n_trees));
    for (int t = 0; t < opt.n_trees; ++t) {
        Rng rng = Rng::from_path(seed, {hash_str("tree"), static_cast<std::uint64_t>(t)});
        std::vector<int> sample;
        sample.reserve(static_cast<std::size_t>(n));
        if (opt.bootstrap) {
            for (int i = 0; i < n; ++i)
                sample.push_back(canon[rng.index(static_cast<std::size_t>(n))]);
        } else {
            sample = canon;
        }
        model.trees.push_back(
            detail::grow_tree(x, y, sample, n_feat, n_splits, classification, rng));
    }
    return model;
}

inline double predict_forest(const ForestModel& model, const double* x) {
    if (model.task == ForestModel::Task::regression) {
        double s = 0.0;
        for (const auto& tree : model.trees) s += tree.predict(x);
        return s / static_cast<double>(model.trees.size());
    }
    std::map<int, int> votes;  // ordered: ties -> lowest label
    for (const auto& tree : model.trees) ++votes[static_cast<int>(tree.predict(x))];
    int best_label = votes.begin()->first, best_count = 0;
    for (auto& [label, cnt] : votes)
        if (cnt > best_count) {
            best_label = label;
            best_count = cnt;
        }
    return best_label;
}

inline double predict_forest(const ForestModel& model, const std::vector<double>& x) {
    return predict_forest(model, x.data());
}

}  // namespace simkern
