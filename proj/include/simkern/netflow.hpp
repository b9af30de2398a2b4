#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/rng.hpp"

namespace simkern {

// Layer-wise DAG with a single source, exactly three exit arcs into a
// virtual sink, and unit flow routed along a min-cost source->sink path.
struct LayeredDag {
    struct Arc {
        int from = 0;
        int to = 0;
        double base_cost = 0.0;
        int layer_tag = 0;  // 1-based index of the source node's layer
        bool is_variable = false;
        bool is_exit = false;
    };

    std::vector<int> layers;       // node count per layer (excludes the sink)
    std::vector<Arc> arcs;         // forward-only, grouped in generation order
    std::vector<int> exit_arcs;    // the 3 final-layer arc ids, in class order
    std::vector<int> variable_arcs;  // the arc ids whose costs vary per sample
    int node_count = 0;            // includes the sink, which is node_count-1

    int sink() const { return node_count - 1; }
};

enum class PerturbScheme { less_noisy, noisier };

inline PerturbScheme parse_scheme(const std::string& s) {
    if (s == "less_noisy") return PerturbScheme::less_noisy;
    if (s == "noisier") return PerturbScheme::noisier;
    throw UnknownScheme("unknown perturbation scheme `" + s + "`");
}

// Generates the random layered topology. Every non-exit node is guaranteed
// at least one outgoing and one incoming arc (a forced arc to/from the
// adjacent layer is added when sampling left none). Base costs are uniform
// in [cost_low, cost_high]. 12 non-exit arcs are designated variable.
inline LayeredDag generate_layered_dag(const std::vector<int>& layer_sizes, double p_adjacent,
                                       double p_skip, double cost_low, double cost_high,
                                       std::uint64_t seed, int n_variable = 12) {
    if (layer_sizes.size() < 2 || layer_sizes.front() != 1)
        throw InfeasibleTopology("need >= 2 layers and a single source");
    if (layer_sizes.back() != 3)
        throw InfeasibleTopology("final layer must have 3 nodes (one per exit arc)");

    LayeredDag dag;
    dag.layers = layer_sizes;
    std::vector<int> layer_start(layer_sizes.size());
    int n = 0;
    for (std::size_t l = 0; l < layer_sizes.size(); ++l) {
        layer_start[l] = n;
        n += layer_sizes[l];
    }
    dag.node_count = n + 1;  // + sink
    const int sink = n;

    Rng topo = Rng::from_path(seed, {hash_str("dag-topology")});
    auto node = [&](std::size_t layer, int idx) { return layer_start[layer] + idx; };

    // adjacent-layer arcs
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        for (int i = 0; i < layer_sizes[l]; ++i)
            for (int j = 0; j < layer_sizes[l + 1]; ++j)
                if (topo.bernoulli(p_adjacent))
                    dag.arcs.push_back({node(l, i), node(l + 1, j), 0.0,
                                        static_cast<int>(l) + 1, false, false});
    }
    // skip arcs between non-adjacent layers
    for (std::size_t l = 0; l + 2 < layer_sizes.size(); ++l) {
        for (std::size_t m = l + 2; m < layer_sizes.size(); ++m)
            for (int i = 0; i < layer_sizes[l]; ++i)
                for (int j = 0; j < layer_sizes[m]; ++j)
                    if (topo.bernoulli(p_skip))
                        dag.arcs.push_back({node(l, i), node(m, j), 0.0,
                                            static_cast<int>(l) + 1, false, false});
    }

    // force connectivity: every non-final node needs an outgoing arc, every
    // non-source node an incoming one
    std::vector<int> out_deg(dag.node_count, 0), in_deg(dag.node_count, 0);
    auto recount = [&] {
        std::fill(out_deg.begin(), out_deg.end(), 0);
        std::fill(in_deg.begin(), in_deg.end(), 0);
        for (const auto& a : dag.arcs) {
            ++out_deg[a.from];
            ++in_deg[a.to];
        }
    };
    recount();
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
        for (int i = 0; i < layer_sizes[l]; ++i)
            if (out_deg[node(l, i)] == 0) {
                int j = static_cast<int>(topo.index(static_cast<std::size_t>(layer_sizes[l + 1])));
                dag.arcs.push_back(
                    {node(l, i), node(l + 1, j), 0.0, static_cast<int>(l) + 1, false, false});
                recount();
            }
    for (std::size_t l = 1; l < layer_sizes.size(); ++l)
        for (int j = 0; j < layer_sizes[l]; ++j)
            if (in_deg[node(l, j)] == 0) {
                int i = static_cast<int>(topo.index(static_cast<std::size_t>(layer_sizes[l - 1])));
                dag.arcs.push_back(
                    {node(l - 1, i), node(l, j), 0.0, static_cast<int>(l), false, false});
                recount();
            }

    // arcs must respect topological node order for the path solver
    std::stable_sort(dag.arcs.begin(), dag.arcs.end(),
                     [](const auto& a, const auto& b) { return a.from < b.from; });

    // exit arcs, one per final-layer node, in node order
    const std::size_t last = layer_sizes.size() - 1;
    for (int j = 0; j < 3; ++j) {
        dag.exit_arcs.push_back(static_cast<int>(dag.arcs.size()));
        dag.arcs.push_back(
            {node(last, j), sink, 0.0, static_cast<int>(last) + 1, false, true});
    }

    Rng costs = Rng::from_path(seed, {hash_str("dag-costs")});
    for (auto& a : dag.arcs) a.base_cost = costs.uniform(cost_low, cost_high);

    // variable arcs: a seeded draw among the non-exit arcs
    std::vector<int> candidates;
    for (std::size_t a = 0; a < dag.arcs.size(); ++a)
        if (!dag.arcs[a].is_exit) candidates.push_back(static_cast<int>(a));
    if (static_cast<int>(candidates.size()) < n_variable)
        throw InfeasibleTopology("fewer than " + std::to_string(n_variable) + " non-exit arcs");
    Rng pick = Rng::from_path(seed, {hash_str("dag-variable")});
    pick.shuffle(candidates);
    candidates.resize(static_cast<std::size_t>(n_variable));
    std::sort(candidates.begin(), candidates.end());
    dag.variable_arcs = candidates;
    for (int a : dag.variable_arcs) dag.arcs[static_cast<std::size_t>(a)].is_variable = true;
    return dag;
}

struct UnitFlowSolution {
    std::vector<int> path_arcs;  // source -> sink, in order
    int exit_class = 0;          // 1-based index of the exit arc taken
    double total_cost = 0.0;
};

// Min-cost source->sink path by relaxation in topological node order
// (arcs are sorted by `from`). Exit-arc ties break toward the lowest
// exit index.
inline UnitFlowSolution solve_unit_flow(const LayeredDag& dag, const std::vector<double>& costs) {
    if (costs.size() != dag.arcs.size()) throw SizeMismatch("cost vector size != arc count");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(dag.node_count), inf);
    std::vector<int> parent_arc(static_cast<std::size_t>(dag.node_count), -1);
    std::vector<int> exit_of(static_cast<std::size_t>(dag.node_count), 0);
    dist[0] = 0.0;
    for (std::size_t a = 0; a < dag.arcs.size(); ++a) {
        const auto& arc = dag.arcs[a];
        if (dist[static_cast<std::size_t>(arc.from)] == inf) continue;
        double nd = dist[static_cast<std::size_t>(arc.from)] + costs[a];
        int exit_idx = 0;
        if (arc.is_exit)
            exit_idx = static_cast<int>(
                           std::find(dag.exit_arcs.begin(), dag.exit_arcs.end(),
                                     static_cast<int>(a)) -
                           dag.exit_arcs.begin()) +
                       1;
        auto to = static_cast<std::size_t>(arc.to);
        bool better = nd < dist[to] ||
                      (arc.is_exit && nd == dist[to] && exit_of[to] != 0 && exit_idx < exit_of[to]);
        if (better) {
            dist[to] = nd;
            parent_arc[to] = static_cast<int>(a);
            exit_of[to] = exit_idx;
        }
    }
    auto sink = static_cast<std::size_t>(dag.sink());
    if (dist[sink] == inf) throw NoPath("sink unreachable");

    UnitFlowSolution sol;
    sol.total_cost = dist[sink];
    sol.exit_class = exit_of[sink];
    for (int v = dag.sink(); v != 0;) {
        int a = parent_arc[static_cast<std::size_t>(v)];
        sol.path_arcs.push_back(a);
        v = dag.arcs[static_cast<std::size_t>(a)].from;
    }
    std::reverse(sol.path_arcs.begin(), sol.path_arcs.end());
    return sol;
}

// Applies a SIM1 perturbation scheme multiplicatively on the given
// (per-sample) costs. less_noisy: the 12 variable arcs by U(0.1,1.9) and
// every layer-2 arc by U(0.5,1.5). noisier: additionally layer-3 arcs by
// U(0.5,1.5) and the third exit arc by U(9,10). All draws come from
// trial_seed in a fixed arc order.
inline std::vector<double> perturb_costs(const LayeredDag& dag, PerturbScheme scheme,
                                         std::vector<double> sample_costs,
                                         std::uint64_t trial_seed) {
    if (sample_costs.size() != dag.arcs.size())
        throw SizeMismatch("cost vector size != arc count");
    Rng rng = Rng::from_path(trial_seed, {hash_str("perturb")});
    for (int a : dag.variable_arcs)
        sample_costs[static_cast<std::size_t>(a)] *= rng.uniform(0.1, 1.9);
    for (std::size_t a = 0; a < dag.arcs.size(); ++a)
        if (dag.arcs[a].layer_tag == 2 && !dag.arcs[a].is_exit)
            sample_costs[a] *= rng.uniform(0.5, 1.5);
    if (scheme == PerturbScheme::noisier) {
        for (std::size_t a = 0; a < dag.arcs.size(); ++a)
            if (dag.arcs[a].layer_tag == 3 && !dag.arcs[a].is_exit)
                sample_costs[a] *= rng.uniform(0.5, 1.5);
        sample_costs[static_cast<std::size_t>(dag.exit_arcs[2])] *= rng.uniform(9.0, 10.0);
    }
    return sample_costs;
}

inline std::vector<double> base_costs(const LayeredDag& dag) {
    std::vector<double> c(dag.arcs.size());
    for (std::size_t a = 0; a < dag.arcs.size(); ++a) c[a] = dag.arcs[a].base_cost;
    return c;
}

}  // namespace simkern
