#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "transitmesh/contact_graph.hpp"
#include "transitmesh/parallel.hpp"

namespace transitmesh {

// One vehicle trip's slice of the contact network.
struct TripSubgraph {
    TripIdx trip = 0;
    std::vector<PassengerIdx> nodes;  // sorted; every passenger with a leg on the trip
    std::vector<ContactEdge> edges;   // contacts recorded on this trip
};

// Maximal clique within a single trip's subgraph. Passengers that ride a
// vehicle alone (or never overlap anyone long enough) form singleton groups.
struct AtomicGroup {
    std::uint32_t group_id = 0;
    TripIdx trip = 0;
    std::vector<PassengerIdx> members;  // sorted

    bool operator==(const AtomicGroup&) const = default;
};

// Splits the contact network by trip. Every trip in the table appears once;
// edge endpoints are always contained in `nodes`.
inline std::vector<TripSubgraph> partition(const ContactGraph& g) {
    std::vector<TripSubgraph> subs(g.trips.size());
    for (std::size_t t = 0; t < g.trips.size(); ++t) {
        subs[t].trip = static_cast<TripIdx>(t);
        subs[t].nodes.reserve(g.trip_legs[t].size());
        for (const TripLeg& leg : g.trip_legs[t]) subs[t].nodes.push_back(leg.passenger);
    }
    for (const ContactEdge& e : g.edges) subs[e.trip].edges.push_back(e);
    return subs;
}

namespace detail {

// Bron-Kerbosch with Tomita pivoting over sorted local-index vectors.
class CliqueEnumerator {
public:
    explicit CliqueEnumerator(const std::vector<std::vector<std::uint32_t>>& adj,
                              std::vector<std::vector<std::uint32_t>>& out)
        : adj_(adj), out_(out) {}

    void expand(std::vector<std::uint32_t> p, std::vector<std::uint32_t> x) {
        if (p.empty()) {
            if (x.empty()) {
                std::vector<std::uint32_t> clique = current_;
                std::sort(clique.begin(), clique.end());
                out_.push_back(std::move(clique));
            }
            return;  // x non-empty: current set extends to a clique found elsewhere
        }
        const std::uint32_t u = pivot(p, x);
        std::vector<std::uint32_t> ext;
        std::set_difference(p.begin(), p.end(), adj_[u].begin(), adj_[u].end(),
                            std::back_inserter(ext));
        for (const std::uint32_t v : ext) {
            current_.push_back(v);
            expand(intersect(p, adj_[v]), intersect(x, adj_[v]));
            current_.pop_back();
            p.erase(std::lower_bound(p.begin(), p.end(), v));
            x.insert(std::lower_bound(x.begin(), x.end(), v), v);
        }
    }

    void seed(std::uint32_t v) { current_.assign(1, v); }

private:
    std::uint32_t pivot(const std::vector<std::uint32_t>& p,
                        const std::vector<std::uint32_t>& x) const {
        std::uint32_t best = p.front();  // callers guarantee p is non-empty
        std::size_t best_cover = 0;
        bool have = false;
        auto consider = [&](std::uint32_t u) {
            const std::size_t cover = intersection_size(p, adj_[u]);
            if (!have || cover > best_cover) {
                have = true;
                best = u;
                best_cover = cover;
            }
        };
        for (const std::uint32_t u : p) consider(u);
        for (const std::uint32_t u : x) consider(u);
        return best;
    }

    static std::size_t intersection_size(const std::vector<std::uint32_t>& a,
                                         const std::vector<std::uint32_t>& b) {
        std::size_t n = 0;
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() && j != b.end()) {
            if (*i < *j) ++i;
            else if (*j < *i) ++j;
            else { ++n; ++i; ++j; }
        }
        return n;
    }

    static std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a,
                                                const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(out));
        return out;
    }

    const std::vector<std::vector<std::uint32_t>>& adj_;
    std::vector<std::uint32_t> current_;
    std::vector<std::vector<std::uint32_t>>& out_;
};

// Degeneracy order: repeatedly remove a minimum-degree vertex, lowest index
// first on ties. Deterministic.
inline std::vector<std::uint32_t> degeneracy_order(
    const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    std::vector<std::uint32_t> deg(n);
    std::set<std::pair<std::uint32_t, std::uint32_t>> queue;
    for (std::uint32_t v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(adj[v].size());
        queue.emplace(deg[v], v);
    }
    std::vector<char> removed(n, 0);
    std::vector<std::uint32_t> order;
    order.reserve(n);
    while (!queue.empty()) {
        const auto [d, v] = *queue.begin();
        queue.erase(queue.begin());
        removed[v] = 1;
        order.push_back(v);
        for (const std::uint32_t w : adj[v]) {
            if (removed[w]) continue;
            queue.erase({deg[w], w});
            --deg[w];
            queue.emplace(deg[w], w);
        }
    }
    return order;
}

// All maximal cliques of a simple graph given as sorted adjacency lists.
// Outer level walks a degeneracy order; inner levels use pivoting.
inline std::vector<std::vector<std::uint32_t>> maximal_cliques(
    const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    const std::vector<std::uint32_t> order = degeneracy_order(adj);
    std::vector<std::uint32_t> rank(n);
    for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;

    std::vector<std::vector<std::uint32_t>> cliques;
    CliqueEnumerator enumerator(adj, cliques);
    for (const std::uint32_t v : order) {
        std::vector<std::uint32_t> p, x;
        for (const std::uint32_t w : adj[v]) {
            if (rank[w] > rank[v]) p.push_back(w);
            else x.push_back(w);
        }
        enumerator.seed(v);
        enumerator.expand(std::move(p), std::move(x));
    }
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

// Collapses an edge list over n vertices to sorted, deduplicated adjacency.
inline std::vector<std::vector<std::uint32_t>> build_adjacency(
    std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

}  // namespace detail

// Maximal cliques of one trip subgraph as atomic groups. Members are global
// passenger indices; group ids number the cliques in sorted member order.
inline std::vector<AtomicGroup> bron_kerbosch(const TripSubgraph& sub) {
    const std::uint32_t n = static_cast<std::uint32_t>(sub.nodes.size());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> local_edges;
    local_edges.reserve(sub.edges.size());
    auto local = [&](PassengerIdx p) {
        const auto it = std::lower_bound(sub.nodes.begin(), sub.nodes.end(), p);
        return static_cast<std::uint32_t>(it - sub.nodes.begin());
    };
    for (const ContactEdge& e : sub.edges) local_edges.emplace_back(local(e.u), local(e.v));
    const auto adj = detail::build_adjacency(n, local_edges);
    const auto cliques = detail::maximal_cliques(adj);

    std::vector<AtomicGroup> groups;
    groups.reserve(cliques.size());
    for (const auto& c : cliques) {
        AtomicGroup g;
        g.group_id = static_cast<std::uint32_t>(groups.size());
        g.trip = sub.trip;
        g.members.reserve(c.size());
        for (const std::uint32_t v : c) g.members.push_back(sub.nodes[v]);
        groups.push_back(std::move(g));
    }
    return groups;
}

// Maximal cliques of a single trip computed by an interval sweep instead of
// recursive search. Input legs must all belong to one trip. Returns member
// sets over a local passenger-id table.
struct IntervalCliqueSet {
    std::string trip_id;
    std::vector<std::string> passengers;  // sorted local table
    std::vector<AtomicGroup> groups;      // members index `passengers`; trip unused (0)
};

inline IntervalCliqueSet interval_cliques(const std::vector<TrajectoryLeg>& legs,
                                          Minutes tau = 0) {
    if (tau < 0) throw ValidationError("interval_cliques: tau must be >= 0");
    IntervalCliqueSet out;
    if (legs.empty()) return out;
    out.trip_id = legs.front().trip_id;
    for (const TrajectoryLeg& leg : legs) {
        if (leg.trip_id != out.trip_id)
            throw ValidationError("interval_cliques: legs span more than one trip");
        out.passengers.push_back(leg.passenger_id);
    }
    std::sort(out.passengers.begin(), out.passengers.end());
    out.passengers.erase(std::unique(out.passengers.begin(), out.passengers.end()),
                         out.passengers.end());

    // A pair rides together for >= max(tau, 1) minutes exactly when their
    // boarding intervals, shifted to [board, alight - m + 1), overlap.
    const Minutes m = std::max<Minutes>(tau, 1);
    struct Event {
        Minutes time;
        int kind;  // 0 = remove, 1 = add; removals first on ties
        std::uint32_t node;
    };
    std::vector<Event> events;
    for (const TrajectoryLeg& leg : legs) {
        if (leg.alight_time - leg.board_time < m) continue;
        const auto it =
            std::lower_bound(out.passengers.begin(), out.passengers.end(), leg.passenger_id);
        const auto node = static_cast<std::uint32_t>(it - out.passengers.begin());
        events.push_back({leg.board_time, 1, node});
        events.push_back({static_cast<Minutes>(leg.alight_time - m + 1), 0, node});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.node < b.node;
    });

    std::vector<std::uint32_t> active;
    bool added_since_emit = false;
    auto emit = [&] {
        AtomicGroup g;
        g.group_id = static_cast<std::uint32_t>(out.groups.size());
        g.members = active;
        out.groups.push_back(std::move(g));
    };
    for (const Event& ev : events) {
        if (ev.kind == 1) {
            active.insert(std::lower_bound(active.begin(), active.end(), ev.node), ev.node);
            added_since_emit = true;
        } else {
            if (added_since_emit) {
                emit();
                added_since_emit = false;
            }
            active.erase(std::lower_bound(active.begin(), active.end(), ev.node));
        }
    }
    return out;
}

struct EnumerationTiming {
    double partitioned_seconds = 0.0;
    std::optional<double> raw_seconds;  // set when the raw benchmark ran
};

// Atomic groups for the whole network: per-trip Bron-Kerbosch, trips handled
// independently (and in parallel), group ids dense in trip order. With
// run_raw the full network is also collapsed to one simple graph and
// enumerated unpartitioned, for comparison; those cliques land in raw_cliques.
struct EnumerationResult {
    std::vector<AtomicGroup> groups;
    std::vector<std::vector<PassengerIdx>> raw_cliques;
    EnumerationTiming timing;
};

inline EnumerationResult enumerate_all(const ContactGraph& g, bool run_raw = false) {
    EnumerationResult result;
    const std::vector<TripSubgraph> subs = partition(g);
    std::vector<std::vector<AtomicGroup>> per_trip(subs.size());

    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(subs.size(), [&](std::size_t i) { per_trip[i] = bron_kerbosch(subs[i]); });
    const auto t1 = std::chrono::steady_clock::now();
    result.timing.partitioned_seconds = std::chrono::duration<double>(t1 - t0).count();

    std::size_t total = 0;
    for (const auto& v : per_trip) total += v.size();
    result.groups.reserve(total);
    for (auto& v : per_trip) {
        for (AtomicGroup& grp : v) {
            grp.group_id = static_cast<std::uint32_t>(result.groups.size());
            result.groups.push_back(std::move(grp));
        }
    }

    if (run_raw) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> flat;
        for (const std::uint64_t key : simple_pairs(g))
            flat.emplace_back(pair_key_u(key), pair_key_v(key));
        const auto adj =
            detail::build_adjacency(static_cast<std::uint32_t>(g.passengers.size()), flat);
        const auto r0 = std::chrono::steady_clock::now();
        auto cliques = detail::maximal_cliques(adj);
        const auto r1 = std::chrono::steady_clock::now();
        result.timing.raw_seconds = std::chrono::duration<double>(r1 - r0).count();
        result.raw_cliques = std::move(cliques);
    }
    return result;
}

}  // namespace transitmesh
