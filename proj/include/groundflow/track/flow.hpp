#pragma once

// Offline association as min-cost flow over detections. Every detection is
// split into (pre, post) nodes joined by an observation arc; the source
// feeds every pre node, every post node drains into the sink and
// transition arcs run forward in time. All arcs have unit capacity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "groundflow/core.hpp"

namespace groundflow {

struct EdgeCostParams {
    double sigma_t = 0.5;
    double sigma_d = 0.15;
    double sigma_m = 0.15;
    int max_gap = 3;
    double entry_cost = 0.2;
    double exit_cost = 0.2;
    double obs_cost_scale = 1.0;
    /// Transition arcs longer than this are not created.
    double max_link_distance = std::numeric_limits<double>::infinity();

    void validate() const {
        if (max_gap < 1) throw ConfigError("edges.max_gap must be >= 1");
        if (!(sigma_t >= 0.0 && sigma_d >= 0.0 && sigma_m >= 0.0)) throw ConfigError("edge sigmas must be >= 0");
        if (!(entry_cost >= 0.0 && exit_cost >= 0.0)) throw ConfigError("entry/exit costs must be >= 0");
        if (!(obs_cost_scale > 0.0)) throw ConfigError("edges.obs_cost_scale must be > 0");
    }
};

/// Transition cost between detection i at t1 and j at t2:
/// -exp(-sigma_t (g - 1)) exp(-sigma_d d(i, j)) exp(-sigma_m d(i, j + g delta_j)),
/// with g = t2 - t1 and delta_j the backward offset sampled at j.
inline double edge_cost(Vec2 i, Vec2 j, int t1, int t2, Vec2 delta_bwd_at_j, const EdgeCostParams& p) {
    const int gap = t2 - t1;
    if (gap < 1 || gap > p.max_gap)
        throw ConfigError("edge_cost: gap " + std::to_string(gap) + " outside [1, " + std::to_string(p.max_gap) + "]");
    const double d = distance(i, j);
    const double residual = distance(i, j + delta_bwd_at_j * static_cast<double>(gap));
    return -std::exp(-p.sigma_t * (gap - 1)) * std::exp(-p.sigma_d * d) * std::exp(-p.sigma_m * residual);
}

class TrackingGraph {
public:
    struct Transition {
        int from = 0;
        int to = 0;
        double cost = 0.0;
    };

    int add_detection(const Detection& d, double entry, double exit, double obs) {
        if (!dets_.empty() && d.time < dets_.back().time)
            throw ConfigError("tracking graph: detections must be added in time order");
        dets_.push_back(d);
        entry_.push_back(entry);
        exit_.push_back(exit);
        obs_.push_back(obs);
        return static_cast<int>(dets_.size()) - 1;
    }

    void add_transition(int from, int to, double cost) {
        if (from < 0 || to < 0 || from >= num_detections() || to >= num_detections())
            throw ConfigError("tracking graph: transition endpoint out of range");
        if (!(dets_[from].time < dets_[to].time))
            throw ConfigError("tracking graph: transitions must go forward in time");
        transitions_.push_back({from, to, cost});
    }

    int num_detections() const { return static_cast<int>(dets_.size()); }
    const std::vector<Detection>& detections() const { return dets_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    double entry(int k) const { return entry_[k]; }
    double exit(int k) const { return exit_[k]; }
    double obs(int k) const { return obs_[k]; }

    std::size_t num_arcs() const { return 3 * dets_.size() + transitions_.size(); }

    /// Edge list `src,dst,cost,capacity`; node 0 is the source, 1 the sink,
    /// 2 + 2k / 3 + 2k the pre / post nodes of detection k.
    std::string dump_edges() const {
        std::string out = "src,dst,cost,capacity\n";
        auto line = [&](int a, int b, double c) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%d,%.9g,1\n", a, b, c);
            out += buf;
        };
        for (int k = 0; k < num_detections(); ++k) {
            line(0, 2 + 2 * k, entry_[k]);
            line(2 + 2 * k, 3 + 2 * k, obs_[k]);
            line(3 + 2 * k, 1, exit_[k]);
        }
        for (const auto& t : transitions_) line(3 + 2 * t.from, 2 + 2 * t.to, t.cost);
        return out;
    }

private:
    std::vector<Detection> dets_;
    std::vector<double> entry_, exit_, obs_;
    std::vector<Transition> transitions_;
};

/// Builds the graph for time-sorted detections. `backward` holds one field
/// per frame pair: backward[k] maps frame k + 1 back to frame k. An empty
/// list means no motion information (zero offsets).
inline TrackingGraph build_graph(std::span<const Detection> detections, std::span<const OffsetField> backward,
                                 const EdgeCostParams& p) {
    p.validate();
    TrackingGraph g;
    for (const auto& d : detections) g.add_detection(d, p.entry_cost, p.exit_cost, -p.obs_cost_scale * d.confidence);
    const int n = g.num_detections();
    for (int a = 0; a < n; ++a) {
        const auto& da = g.detections()[a];
        for (int b = a + 1; b < n; ++b) {
            const auto& db = g.detections()[b];
            const int gap = db.time - da.time;
            if (gap < 1) continue;
            if (gap > p.max_gap) break;
            if (distance(da.pos, db.pos) > p.max_link_distance) continue;
            Vec2 delta{};
            const auto pair_index = static_cast<std::size_t>(db.time - 1);
            if (!backward.empty() && p.sigma_m > 0.0) {
                if (pair_index >= backward.size()) throw DimensionError("build_graph: missing backward offset field");
                delta = backward[pair_index].sample(db.pos);
            }
            g.add_transition(a, b, edge_cost(da.pos, db.pos, da.time, db.time, delta, p));
        }
    }
    return g;
}

struct FlowSolution {
    std::vector<std::vector<int>> paths;  // detection indices per track, time-increasing
    double total_cost = 0.0;
};

inline std::vector<Trajectory> paths_to_trajectories(const TrackingGraph& g, const FlowSolution& sol) {
    std::vector<Trajectory> out;
    int id = 0;
    for (const auto& path : sol.paths) {
        Trajectory t(id++);
        for (int k : path) t.append(g.detections()[k].time, g.detections()[k].pos);
        out.push_back(std::move(t));
    }
    return out;
}

/// Successive shortest paths. The first path comes from a relaxation sweep
/// in topological order (negative arcs allowed); later paths from Dijkstra
/// on reduced costs. Augmentation stops once the shortest path is no longer
/// negative, which yields the minimum cost over all flow values.
inline FlowSolution solve_ssp(const TrackingGraph& g) {
    const int n_det = g.num_detections();
    FlowSolution sol;
    if (n_det == 0) return sol;

    const int n_nodes = 2 + 2 * n_det;
    const int source = 0, sink = 1;
    auto pre = [](int k) { return 2 + 2 * k; };
    auto post = [](int k) { return 3 + 2 * k; };

    struct Arc {
        int to;
        int rev;
        int cap;
        double cost;
        bool forward;
    };
    std::vector<std::vector<Arc>> adj(n_nodes);
    auto add_arc = [&](int a, int b, double c) {
        adj[a].push_back({b, static_cast<int>(adj[b].size()), 1, c, true});
        adj[b].push_back({a, static_cast<int>(adj[a].size()) - 1, 0, -c, false});
    };
    for (int k = 0; k < n_det; ++k) {
        add_arc(source, pre(k), g.entry(k));
        add_arc(pre(k), post(k), g.obs(k));
        add_arc(post(k), sink, g.exit(k));
    }
    for (const auto& t : g.transitions()) add_arc(post(t.from), pre(t.to), t.cost);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> potential(n_nodes, 0.0), dist(n_nodes, inf);
    std::vector<int> prev_node(n_nodes, -1), prev_arc(n_nodes, -1);

    // Initial distances on the DAG: source, then (pre, post) per detection in time order, then sink.
    dist[source] = 0.0;
    auto relax_from = [&](int u) {
        if (dist[u] == inf) return;
        for (int a = 0; a < static_cast<int>(adj[u].size()); ++a) {
            const Arc& e = adj[u][a];
            if (e.cap > 0 && dist[u] + e.cost < dist[e.to]) {
                dist[e.to] = dist[u] + e.cost;
                prev_node[e.to] = u;
                prev_arc[e.to] = a;
            }
        }
    };
    relax_from(source);
    for (int k = 0; k < n_det; ++k) {
        relax_from(pre(k));
        relax_from(post(k));
    }

    double total = 0.0;
    for (;;) {
        if (dist[sink] == inf) break;
        const double path_cost = dist[sink] + potential[sink] - potential[source];
        if (!(path_cost < -1e-12)) break;
        for (int v = sink; v != source; v = prev_node[v]) {
            Arc& e = adj[prev_node[v]][prev_arc[v]];
            e.cap -= 1;
            adj[v][e.rev].cap += 1;
        }
        total += path_cost;
        // Unreachable nodes take the largest finite distance, which keeps
        // every residual reduced cost nonnegative.
        double reach = 0.0;
        for (int v = 0; v < n_nodes; ++v)
            if (dist[v] < inf) reach = std::max(reach, dist[v]);
        for (int v = 0; v < n_nodes; ++v) potential[v] += dist[v] < inf ? dist[v] : reach;

        // Dijkstra on reduced costs.
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(prev_node.begin(), prev_node.end(), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[source] = 0.0;
        pq.push({0.0, source});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (int a = 0; a < static_cast<int>(adj[u].size()); ++a) {
                const Arc& e = adj[u][a];
                if (e.cap <= 0) continue;
                const double reduced = std::max(0.0, e.cost + potential[u] - potential[e.to]);
                if (d + reduced < dist[e.to]) {
                    dist[e.to] = d + reduced;
                    prev_node[e.to] = u;
                    prev_arc[e.to] = a;
                    pq.push({dist[e.to], e.to});
                }
            }
        }
    }

    // Decompose: a forward arc carries flow when its residual capacity is 0.
    std::vector<int> succ(n_det, -1);
    for (int k = 0; k < n_det; ++k)
        for (const Arc& e : adj[post(k)])
            if (e.forward && e.cap == 0 && e.to != sink) succ[k] = (e.to - 2) / 2;
    for (const Arc& e : adj[source]) {
        if (!e.forward || e.cap != 0) continue;
        std::vector<int> path;
        for (int cur = (e.to - 2) / 2; cur >= 0; cur = succ[cur]) path.push_back(cur);
        sol.paths.push_back(std::move(path));
    }

    sol.total_cost = total;
    return sol;
}

inline double path_set_cost(const TrackingGraph& g, const std::vector<std::vector<int>>& paths) {
    std::map<std::pair<int, int>, double> trans;
    for (const auto& t : g.transitions()) trans[{t.from, t.to}] = t.cost;
    double c = 0.0;
    for (const auto& path : paths) {
        c += g.entry(path.front()) + g.exit(path.back());
        for (std::size_t i = 0; i < path.size(); ++i) {
            c += g.obs(path[i]);
            if (i + 1 < path.size()) c += trans.at({path[i], path[i + 1]});
        }
    }
    return c;
}

/// Exhaustive search over all sets of vertex-disjoint, time-increasing
/// paths (unused detections allowed). Oracle for small instances only.
inline FlowSolution brute_force_tracks(const TrackingGraph& g) {
    const int n = g.num_detections();
    if (n > 10) throw ConfigError("brute_force_tracks: instance too large (> 10 detections)");
    std::map<std::pair<int, int>, double> trans;
    for (const auto& t : g.transitions()) trans[{t.from, t.to}] = t.cost;

    FlowSolution best;
    best.total_cost = 0.0;  // the empty solution
    std::vector<std::vector<int>> open;

    std::function<void(int, double)> recurse = [&](int k, double cost) {
        if (k == n) {
            double c = cost;
            for (const auto& p : open) c += g.exit(p.back());
            if (c < best.total_cost - 1e-12) {
                best.total_cost = c;
                best.paths = open;
            }
            return;
        }
        recurse(k + 1, cost);  // unused
        open.push_back({k});
        recurse(k + 1, cost + g.entry(k) + g.obs(k));
        open.pop_back();
        for (std::size_t p = 0; p < open.size(); ++p) {
            auto it = trans.find({open[p].back(), k});
            if (it == trans.end()) continue;
            open[p].push_back(k);
            recurse(k + 1, cost + it->second + g.obs(k));
            open[p].pop_back();
        }
    };
    recurse(0, 0.0);
    if (!best.paths.empty()) best.total_cost = path_set_cost(g, best.paths);
    return best;
}

}  // namespace groundflow
