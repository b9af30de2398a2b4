#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/matrix.hpp"
#include "simkern/ode.hpp"

namespace simkern {

// How per-trial simulation outputs are scored against each other.
struct SimilarityConfig {
    enum class Kind { trajectory, categorical, vector };
    Kind kind = Kind::trajectory;
    // trajectory kind only: w_e in [0,1]; entities not listed get weight 1
    std::map<std::string, double> entity_weights;
    // optional restriction of which entities contribute at all
    std::optional<std::vector<std::string>> entity_subset;
};

using TrialOutput = std::variant<Trajectory, int, std::vector<double>>;

struct TrialOutputs {
    int trial_index = 0;
    std::vector<TrialOutput> outputs;  // one per sample
};

// z = 1 - (1/(E*T)) sum_e w_e sum_k ((La - Lb)/M)^2, M the max level either
// trajectory reaches for entity e. An entity with M = 0 (both identically
// zero) contributes zero difference, which keeps z(a,a) = 1.
inline double trajectory_similarity(const Trajectory& a, const Trajectory& b,
                                    const SimilarityConfig& cfg) {
    if (a.times != b.times) throw GridMismatch("trajectories have different time grids");
    if (a.entity_names != b.entity_names)
        throw EntityMismatch("trajectories have different entities");

    std::vector<std::size_t> entities;
    if (cfg.entity_subset) {
        for (const auto& name : *cfg.entity_subset) entities.push_back(a.entity_index(name));
    } else {
        for (std::size_t e = 0; e < a.entity_count(); ++e) entities.push_back(e);
    }
    const std::size_t T = a.time_count();
    const double ET = static_cast<double>(entities.size()) * static_cast<double>(T);

    double acc = 0.0;
    for (std::size_t e : entities) {
        double w = 1.0;
        auto it = cfg.entity_weights.find(a.entity_names[e]);
        if (it != cfg.entity_weights.end()) w = it->second;
        if (w == 0.0) continue;
        double m = 0.0;
        for (std::size_t k = 0; k < T; ++k)
            m = std::max(m, std::max(a.level(e, k), b.level(e, k)));
        if (m == 0.0) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < T; ++k) {
            double d = (a.level(e, k) - b.level(e, k)) / m;
            s += d * d;
        }
        acc += w * s;
    }
    return 1.0 - acc / ET;
}

inline double categorical_similarity(int a, int b) { return a == b ? 1.0 : 0.0; }

// z = 1 - mean_c ((va_c - vb_c)/M_c)^2 with M_c the componentwise max
// magnitude; zero-max components contribute 0.
inline double vector_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw SizeMismatch("vectors have different sizes");
    if (a.empty()) return 1.0;
    double acc = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double m = std::max(std::fabs(a[c]), std::fabs(b[c]));
        if (m == 0.0) continue;
        double d = (a[c] - b[c]) / m;
        acc += d * d;
    }
    return 1.0 - acc / static_cast<double>(a.size());
}

inline double output_similarity(const TrialOutput& a, const TrialOutput& b,
                                const SimilarityConfig& cfg) {
    switch (cfg.kind) {
        case SimilarityConfig::Kind::trajectory:
            return trajectory_similarity(std::get<Trajectory>(a), std::get<Trajectory>(b), cfg);
        case SimilarityConfig::Kind::categorical:
            return categorical_similarity(std::get<int>(a), std::get<int>(b));
        case SimilarityConfig::Kind::vector:
            return vector_similarity(std::get<std::vector<double>>(a),
                                     std::get<std::vector<double>>(b));
    }
    return 0.0;
}

// Full symmetric per-trial similarity matrix Z_r with unit diagonal.
inline Matrix trial_similarity_matrix(const std::vector<TrialOutput>& outputs,
                                      const SimilarityConfig& cfg) {
    const std::size_t n = outputs.size();
    Matrix z(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        z(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = output_similarity(outputs[i], outputs[j], cfg);
            z(i, j) = s;
            z(j, i) = s;
        }
    }
    return z;
}

// Running-mean accumulation K_r = ((r-1) K_{r-1} + Z_r) / r, folded in
// trial order so results are identical across worker counts.
struct SimilarityKernel {
    Matrix K;
    int trials_accumulated = 0;

    void accumulate(const Matrix& z) {
        if (trials_accumulated == 0) {
            K = z;
            trials_accumulated = 1;
            return;
        }
        if (z.rows() != K.rows() || z.cols() != K.cols())
            throw SizeMismatch("trial matrix size mismatch");
        double r = static_cast<double>(++trials_accumulated);
        for (std::size_t i = 0; i < K.data().size(); ++i)
            K.data()[i] = ((r - 1.0) * K.data()[i] + z.data()[i]) / r;
    }
};

inline double convergence_delta(const Matrix& k_r, const Matrix& k_prev) {
    return frobenius_distance(k_r, k_prev);
}

enum class PsdClass { PositiveDefinite, SemiDefinite, Indefinite };

struct PsdResult {
    PsdClass classification;
    double min_eigenvalue = 0.0;
    bool jittered = false;
    std::optional<Matrix> jittered_kernel;  // K + (tol - min_eig) I, jitter mode only
};

inline PsdResult check_psd(const Matrix& k, double tol = 1e-10, bool jitter = false) {
    PsdResult res;
    auto ev = symmetric_eigenvalues(k);
    res.min_eigenvalue = ev.empty() ? 0.0 : ev.front();
    if (res.min_eigenvalue > tol)
        res.classification = PsdClass::PositiveDefinite;
    else if (res.min_eigenvalue >= -tol)
        res.classification = PsdClass::SemiDefinite;
    else
        res.classification = PsdClass::Indefinite;
    if (jitter && res.classification == PsdClass::Indefinite) {
        Matrix fixed = k;
        double delta = tol - res.min_eigenvalue;
        for (std::size_t i = 0; i < k.rows(); ++i) fixed(i, i) += delta;
        res.jittered = true;
        res.jittered_kernel = std::move(fixed);
    }
    return res;
}

}  // namespace simkern
