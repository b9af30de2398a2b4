#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/matrix.hpp"

namespace simkern {

// E entities sampled at T time points. Levels are clamped nonnegative by
// the integrator, which the similarity normalization downstream relies on.
struct Trajectory {
    std::vector<std::string> entity_names;
    std::vector<double> times;
    Matrix levels;  // E x T

    std::size_t entity_count() const { return entity_names.size(); }
    std::size_t time_count() const { return times.size(); }

    double level(std::size_t e, std::size_t k) const { return levels(e, k); }

    std::size_t entity_index(const std::string& name) const {
        for (std::size_t e = 0; e < entity_names.size(); ++e)
            if (entity_names[e] == name) return e;
        throw MissingEntity("entity `" + name + "` not in trajectory");
    }
};

// Classical fixed-step RK4. Components are clamped at 0 after each step;
// output is sampled exactly at the grid times, which must be multiples of
// `step` starting at t=0.
template <class Rhs>
Trajectory integrate_ode(Rhs&& rhs, std::vector<double> initial, const std::vector<double>& grid,
                         double step, std::vector<std::string> entity_names) {
    const std::size_t dim = initial.size();
    Trajectory traj;
    traj.entity_names = std::move(entity_names);
    traj.times = grid;
    traj.levels = Matrix(dim, grid.size());

    std::vector<double> y = std::move(initial);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    auto record = [&](std::size_t gi) {
        for (std::size_t e = 0; e < dim; ++e) traj.levels(e, gi) = y[e];
    };

    double t = 0.0;
    std::size_t gi = 0;
    auto at_grid = [&](double tt) {
        return gi < grid.size() && std::fabs(tt - grid[gi]) < step * 0.5;
    };
    if (at_grid(t)) record(gi++);

    const double t_end = grid.empty() ? 0.0 : grid.back();
    while (gi < grid.size() && t < t_end + step * 0.5) {
        rhs(y, t, k1);
        for (std::size_t e = 0; e < dim; ++e) tmp[e] = y[e] + 0.5 * step * k1[e];
        rhs(tmp, t + 0.5 * step, k2);
        for (std::size_t e = 0; e < dim; ++e) tmp[e] = y[e] + 0.5 * step * k2[e];
        rhs(tmp, t + 0.5 * step, k3);
        for (std::size_t e = 0; e < dim; ++e) tmp[e] = y[e] + step * k3[e];
        rhs(tmp, t + step, k4);
        for (std::size_t e = 0; e < dim; ++e) {
            y[e] += step / 6.0 * (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]);
            if (y[e] < 0.0) y[e] = 0.0;
            if (!std::isfinite(y[e]))
                throw NonFiniteState("state diverged at t=" + std::to_string(t + step), t + step);
        }
        t += step;
        if (at_grid(t)) record(gi++);
    }
    return traj;
}

// Earliest time the entity level exceeds the threshold, linearly
// interpolated between grid points; nullopt when never exceeded (censored).
inline std::optional<double> first_crossing_time(const Trajectory& traj, const std::string& entity,
                                                 double threshold) {
    std::size_t e = traj.entity_index(entity);
    for (std::size_t k = 0; k < traj.time_count(); ++k) {
        double lv = traj.level(e, k);
        if (lv > threshold) {
            if (k == 0) return traj.times[0];
            double prev = traj.level(e, k - 1);
            double frac = (threshold - prev) / (lv - prev);
            return traj.times[k - 1] + frac * (traj.times[k] - traj.times[k - 1]);
        }
    }
    return std::nullopt;
}

inline std::vector<double> uniform_grid(double t_end, std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = t_end * static_cast<double>(i) / (points - 1);
    return g;
}

}  // namespace simkern
