#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/matrix.hpp"

namespace simkern {

enum class Task { classification, regression };
enum class FeatureKind { numeric, categorical };

struct Dataset {
    std::vector<std::string> feature_names;
    Matrix x;                       // N x p
    std::vector<double> y;          // class labels (small ints) or reals
    std::vector<FeatureKind> kinds;  // per feature column
    Task task = Task::classification;

    std::size_t n() const { return x.rows(); }
    std::size_t p() const { return x.cols(); }

    std::vector<int> labels() const {
        std::vector<int> out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = static_cast<int>(y[i]);
        return out;
    }
};

// Per-column [0,1] rescaling fit on one matrix and applicable to another;
// constant columns map to 0.
struct FeatureScaler {
    std::vector<double> mins, ranges;

    static FeatureScaler fit(const Matrix& x) {
        FeatureScaler s;
        s.mins.assign(x.cols(), std::numeric_limits<double>::infinity());
        s.ranges.assign(x.cols(), 0.0);
        std::vector<double> maxs(x.cols(), -std::numeric_limits<double>::infinity());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) {
                s.mins[c] = std::min(s.mins[c], x(r, c));
                maxs[c] = std::max(maxs[c], x(r, c));
            }
        for (std::size_t c = 0; c < x.cols(); ++c) s.ranges[c] = maxs[c] - s.mins[c];
        return s;
    }

    Matrix transform(const Matrix& x) const {
        Matrix out(x.rows(), x.cols());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c)
                out(r, c) = ranges[c] > 0.0 ? (x(r, c) - mins[c]) / ranges[c] : 0.0;
        return out;
    }
};

inline Matrix scale_features(const Matrix& x) { return FeatureScaler::fit(x).transform(x); }

// Each k-valued categorical column becomes k indicator columns (one per
// sorted distinct value); numeric columns pass through unchanged.
inline Matrix one_hot(const Matrix& x, const std::vector<FeatureKind>& kinds) {
    std::vector<std::vector<double>> values(x.cols());
    std::size_t out_cols = 0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        if (kinds[c] == FeatureKind::categorical) {
            std::set<double> uniq;
            for (std::size_t r = 0; r < x.rows(); ++r) uniq.insert(x(r, c));
            values[c].assign(uniq.begin(), uniq.end());
            out_cols += values[c].size();
        } else {
            ++out_cols;
        }
    }
    Matrix out(x.rows(), out_cols);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        std::size_t oc = 0;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            if (kinds[c] == FeatureKind::categorical) {
                for (double v : values[c]) out(r, oc++) = x(r, c) == v ? 1.0 : 0.0;
            } else {
                out(r, oc++) = x(r, c);
            }
        }
    }
    return out;
}

// Euclidean 1-NN; distance ties break toward the lowest training index.
inline double nn_predict(const Matrix& x_train, const std::vector<double>& y_train,
                         const double* query) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x_train.rows(); ++i) {
        double d = 0.0;
        for (std::size_t c = 0; c < x_train.cols(); ++c) {
            double diff = x_train(i, c) - query[c];
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return y_train[best];
}

// Kernelized 1-NN on a row of similarities to the training samples. A
// training sample with similarity 1 is indistinguishable from the query
// and is excluded ("most similar distinct sample"); if that excludes
// everything, the exclusion is dropped. Ties break toward the lowest
// index.
inline double simkern_nn_predict(const std::vector<double>& k_row,
                                 const std::vector<double>& y_train) {
    if (k_row.size() != y_train.size()) throw SizeMismatch("similarity row size != label count");
    const double identical = 1.0 - 1e-12;
    std::ptrdiff_t best = -1;
    double best_s = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k_row.size(); ++i) {
        if (k_row[i] >= identical) continue;
        if (k_row[i] > best_s) {
            best_s = k_row[i];
            best = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (best < 0) {
        for (std::size_t i = 0; i < k_row.size(); ++i)
            if (k_row[i] > best_s) {
                best_s = k_row[i];
                best = static_cast<std::ptrdiff_t>(i);
            }
    }
    return y_train[static_cast<std::size_t>(best)];
}

inline double accuracy(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() != y_hat.size() || y.empty()) throw SizeMismatch("prediction size mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == y_hat[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

inline double r_squared(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() != y_hat.size() || y.empty()) throw SizeMismatch("prediction size mismatch");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sse += (y_hat[i] - y[i]) * (y_hat[i] - y[i]);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    if (sst == 0.0) return sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return 1.0 - sse / sst;
}

}  // namespace simkern
