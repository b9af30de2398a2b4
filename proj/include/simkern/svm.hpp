#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/matrix.hpp"

namespace simkern {

struct KernelSpec {
    enum class Kind { linear, rbf, precomputed };
    Kind kind = Kind::linear;
    double gamma = 1.0;  // rbf only, > 0

    static KernelSpec linear() { return {Kind::linear, 0.0}; }
    static KernelSpec rbf(double gamma) { return {Kind::rbf, gamma}; }
    static KernelSpec precomputed() { return {Kind::precomputed, 0.0}; }
};

inline double kernel_value(const KernelSpec& spec, const double* a, const double* b,
                           std::size_t dim) {
    switch (spec.kind) {
        case KernelSpec::Kind::linear: {
            double s = 0.0;
            for (std::size_t c = 0; c < dim; ++c) s += a[c] * b[c];
            return s;
        }
        case KernelSpec::Kind::rbf: {
            double s = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                double d = a[c] - b[c];
                s += d * d;
            }
            return std::exp(-spec.gamma * s);
        }
        case KernelSpec::Kind::precomputed:
            throw ConfigError("precomputed kernel has no feature-space evaluation");
    }
    return 0.0;
}

// Gram matrix on the rows of X, numerically symmetrized.
inline Matrix compute_gram(const Matrix& x, const KernelSpec& spec) {
    const std::size_t n = x.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = kernel_value(spec, x.row_ptr(i), x.row_ptr(j), x.cols());
            k(i, j) = v;
            k(j, i) = v;
        }
    return k;
}

// ---------------------------------------------------------------------------
// SMO solver for    min_a  1/2 a'Qa + p'a   s.t.  y'a = 0,  0 <= a <= C
// with y_i in {-1,+1}. Maximal-violating-pair working set selection; stops
// when the KKT violation gap drops below eps.
// ---------------------------------------------------------------------------

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;       // the multiplier b with G_t + b*y_t = 0 on free vars
    double objective = 0.0;  // 1/2 a'Qa + p'a at the solution
    long iterations = 0;
};

inline SmoResult solve_smo(const Matrix& q, const std::vector<double>& p,
                           const std::vector<double>& y, double c, double eps = 1e-3,
                           long max_iter = 500000) {
    const std::size_t n = p.size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(p);  // G = Qa + p, a = 0 initially

    const double tau = 1e-12;
    long iter = 0;
    double m_up = 0.0, m_low = 0.0;
    while (true) {
        // working pair: largest violation
        int i = -1, j = -1;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
            bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
            double v = -y[t] * grad[t];
            if (in_up && v > m_up) {
                m_up = v;
                i = static_cast<int>(t);
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = static_cast<int>(t);
            }
        }
        if (i < 0 || j < 0 || m_up - m_low < eps) break;
        if (++iter > max_iter)
            throw NotConverged("SMO did not reach KKT tolerance", iter);

        auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        // step d along (a_i += y_i d, a_j -= y_j d)
        double a_coef = q(ui, ui) + q(uj, uj) - 2.0 * y[ui] * y[uj] * q(ui, uj);
        if (a_coef <= tau) a_coef = tau;
        double b_coef = y[ui] * grad[ui] - y[uj] * grad[uj];  // <= 0 by selection
        double d = -b_coef / a_coef;
        double d_max_i = y[ui] > 0 ? c - alpha[ui] : alpha[ui];
        double d_max_j = y[uj] > 0 ? alpha[uj] : c - alpha[uj];
        d = std::min(d, std::min(d_max_i, d_max_j));
        if (d < 0.0) d = 0.0;

        alpha[ui] += y[ui] * d;
        alpha[uj] -= y[uj] * d;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += q(t, ui) * y[ui] * d - q(t, uj) * y[uj] * d;
    }

    SmoResult res;
    res.alpha = std::move(alpha);
    res.iterations = iter;

    // bias from free vars, else midpoint of the KKT interval
    double sum = 0.0;
    int n_free = 0;
    for (std::size_t t = 0; t < n; ++t)
        if (res.alpha[t] > 0.0 && res.alpha[t] < c) {
            sum += -y[t] * grad[t];
            ++n_free;
        }
    if (n_free > 0)
        res.bias = sum / n_free;
    else if (std::isfinite(m_up) && std::isfinite(m_low))
        res.bias = 0.5 * (m_up + m_low);
    else
        res.bias = 0.0;

    double obj = 0.0;
    for (std::size_t t = 0; t < n; ++t) obj += res.alpha[t] * (grad[t] + p[t]);
    res.objective = 0.5 * obj;  // 1/2 a'(Qa + 2p) / ... == 1/2 a'Qa + p'a
    return res;
}

// ---------------------------------------------------------------------------
// SVC / SVR on a training Gram matrix. One-vs-one multiclass with majority
// vote, ties toward the lowest class index.
// ---------------------------------------------------------------------------

struct SvmModel {
    enum class Task { classification, regression };

    struct Binary {
        int class_pos = 0, class_neg = 0;
        std::vector<int> indices;  // training indices of the support terms
        std::vector<double> coef;  // alpha_i * y_i (SVC) or beta_i (SVR)
        double bias = 0.0;
        double objective = 0.0;
        long iterations = 0;
    };

    Task task = Task::classification;
    KernelSpec kernel;
    Matrix x_train;  // feature kernels only; empty for precomputed
    std::size_t n_train = 0;
    std::vector<int> classes;  // sorted distinct labels
    std::vector<Binary> binaries;
};

struct SvmOptions {
    double eps = 1e-3;
    long max_iter = 500000;
};

inline SvmModel train_svc_gram(const Matrix& k_train, const std::vector<int>& y, double c,
                               const SvmOptions& opt = {}) {
    SvmModel model;
    model.task = SvmModel::Task::classification;
    model.kernel = KernelSpec::precomputed();
    model.n_train = y.size();
    std::set<int> labels(y.begin(), y.end());
    model.classes.assign(labels.begin(), labels.end());

    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            int ca = model.classes[a], cb = model.classes[b];
            std::vector<int> idx;
            std::vector<double> yy;
            for (std::size_t t = 0; t < y.size(); ++t) {
                if (y[t] == ca) {
                    idx.push_back(static_cast<int>(t));
                    yy.push_back(1.0);
                } else if (y[t] == cb) {
                    idx.push_back(static_cast<int>(t));
                    yy.push_back(-1.0);
                }
            }
            const std::size_t m = idx.size();
            Matrix q(m, m);
            for (std::size_t s = 0; s < m; ++s)
                for (std::size_t t = 0; t < m; ++t)
                    q(s, t) = yy[s] * yy[t] *
                              k_train(static_cast<std::size_t>(idx[s]),
                                      static_cast<std::size_t>(idx[t]));
            std::vector<double> p(m, -1.0);
            SmoResult sol = solve_smo(q, p, yy, c, opt.eps, opt.max_iter);

            SvmModel::Binary bin;
            bin.class_pos = ca;
            bin.class_neg = cb;
            bin.bias = sol.bias;
            bin.objective = sol.objective;
            bin.iterations = sol.iterations;
            for (std::size_t s = 0; s < m; ++s)
                if (sol.alpha[s] > 0.0) {
                    bin.indices.push_back(idx[s]);
                    bin.coef.push_back(sol.alpha[s] * yy[s]);
                }
            model.binaries.push_back(std::move(bin));
        }
    }
    return model;
}

inline SvmModel train_svr_gram(const Matrix& k_train, const std::vector<double>& y, double c,
                               double eps_insensitive, const SvmOptions& opt = {}) {
    const std::size_t n = y.size();
    // (alpha, alpha*) pairs: 2n variables with labels (+1...,-1...) and
    // linear term (eps - y; eps + y); beta_i = alpha_i - alpha*_i.
    Matrix q(2 * n, 2 * n);
    std::vector<double> p(2 * n), yy(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = eps_insensitive - y[i];
        p[n + i] = eps_insensitive + y[i];
        yy[i] = 1.0;
        yy[n + i] = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            double k = k_train(i, j);
            q(i, j) = k;
            q(n + i, n + j) = k;
            q(i, n + j) = -k;
            q(n + i, j) = -k;
        }
    }
    SmoResult sol = solve_smo(q, p, yy, c, opt.eps, opt.max_iter);

    SvmModel model;
    model.task = SvmModel::Task::regression;
    model.kernel = KernelSpec::precomputed();
    model.n_train = n;
    SvmModel::Binary bin;
    bin.bias = sol.bias;
    bin.objective = sol.objective;
    bin.iterations = sol.iterations;
    for (std::size_t i = 0; i < n; ++i) {
        double beta = sol.alpha[i] - sol.alpha[n + i];
        if (beta != 0.0) {
            bin.indices.push_back(static_cast<int>(i));
            bin.coef.push_back(beta);
        }
    }
    model.binaries.push_back(std::move(bin));
    return model;
}

// Feature-space entry points: the Gram matrix is computed from the rows of
// X, and the model keeps X for prediction-time kernel evaluation.
inline SvmModel train_svc(const Matrix& x, const std::vector<int>& y, double c,
                          const KernelSpec& kernel, const SvmOptions& opt = {}) {
    SvmModel model = train_svc_gram(compute_gram(x, kernel), y, c, opt);
    model.kernel = kernel;
    model.x_train = x;
    return model;
}

inline SvmModel train_svr(const Matrix& x, const std::vector<double>& y, double c,
                          double eps_insensitive, const KernelSpec& kernel,
                          const SvmOptions& opt = {}) {
    SvmModel model = train_svr_gram(compute_gram(x, kernel), y, c, eps_insensitive, opt);
    model.kernel = kernel;
    model.x_train = x;
    return model;
}

namespace detail {

inline double binary_decision(const SvmModel::Binary& bin, const std::vector<double>& k_row) {
    double f = bin.bias;
    for (std::size_t s = 0; s < bin.indices.size(); ++s)
        f += bin.coef[s] * k_row[static_cast<std::size_t>(bin.indices[s])];
    return f;
}

}  // namespace detail

// Predict from a row of kernel values against the training samples (in
// training order).
inline int predict_svc_row(const SvmModel& model, const std::vector<double>& k_row) {
    if (k_row.size() != model.n_train) throw SizeMismatch("kernel row size != training size");
    if (model.classes.size() == 1) return model.classes.front();
    std::map<int, int> votes;
    for (const auto& bin : model.binaries) {
        double f = detail::binary_decision(bin, k_row);
        ++votes[f >= 0.0 ? bin.class_pos : bin.class_neg];
    }
    int best = model.classes.front(), best_votes = -1;
    for (int c : model.classes) {  // class order fixes the tie rule
        auto it = votes.find(c);
        int v = it == votes.end() ? 0 : it->second;
        if (v > best_votes) {
            best = c;
            best_votes = v;
        }
    }
    return best;
}

inline double predict_svr_row(const SvmModel& model, const std::vector<double>& k_row) {
    if (k_row.size() != model.n_train) throw SizeMismatch("kernel row size != training size");
    return detail::binary_decision(model.binaries.front(), k_row);
}

inline std::vector<double> feature_kernel_row(const SvmModel& model, const double* x,
                                              std::size_t dim) {
    std::vector<double> row(model.n_train);
    for (std::size_t s = 0; s < model.n_train; ++s)
        row[s] = kernel_value(model.kernel, model.x_train.row_ptr(s), x, dim);
    return row;
}

inline int predict_svc(const SvmModel& model, const std::vector<double>& x) {
    return predict_svc_row(model, feature_kernel_row(model, x.data(), x.size()));
}

inline double predict_svr(const SvmModel& model, const std::vector<double>& x) {
    return predict_svr_row(model, feature_kernel_row(model, x.data(), x.size()));
}

}  // namespace simkern
