#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>
#include <vector>

#include "transitmesh/cliques.hpp"
#include "transitmesh/core.hpp"

namespace transitmesh {

// Co-membership tally for a passenger pair: how many atomic groups contain
// both, split per trip.
struct CoMembership {
    PassengerIdx u = 0;  // u < v
    PassengerIdx v = 0;
    std::uint32_t g_total = 0;
    std::vector<std::pair<TripIdx, std::uint32_t>> per_trip;  // sorted by trip, counts >= 1

    bool operator==(const CoMembership&) const = default;
};

// Connection strength: g(g-1)/2 - sum_t g_t(g_t-1)/2 with g = g_total.
// Rewards co-membership spread across trips, zeroes out single-trip pairs.
inline std::uint64_t connection_strength(const CoMembership& cm) {
    const std::uint64_t g = cm.g_total;
    std::uint64_t s = g * (g - 1) / 2;
    for (const auto& [trip, gt] : cm.per_trip) {
        const std::uint64_t t = gt;
        s -= t * (t - 1) / 2;
    }
    return s;
}

inline std::vector<CoMembership> co_memberships(const std::vector<AtomicGroup>& groups) {
    std::map<std::uint64_t, std::map<TripIdx, std::uint32_t>> tally;
    for (const AtomicGroup& g : groups) {
        for (std::size_t i = 0; i < g.members.size(); ++i)
            for (std::size_t j = i + 1; j < g.members.size(); ++j)
                ++tally[pair_key(g.members[i], g.members[j])][g.trip];
    }
    std::vector<CoMembership> out;
    out.reserve(tally.size());
    for (const auto& [key, per_trip] : tally) {
        CoMembership cm;
        cm.u = pair_key_u(key);
        cm.v = pair_key_v(key);
        for (const auto& [trip, count] : per_trip) {
            cm.g_total += count;
            cm.per_trip.emplace_back(trip, count);
        }
        out.push_back(std::move(cm));
    }
    return out;
}

struct CommunityEdge {
    PassengerIdx u = 0;  // u < v
    PassengerIdx v = 0;
    std::uint64_t strength = 0;

    bool operator==(const CommunityEdge&) const = default;
};

// Community network H: passengers who traveled on at least two vehicle trips
// with another passenger. Indices refer to the contact graph's passenger
// table.
struct CommunityGraph {
    std::vector<PassengerIdx> nodes;    // sorted; exactly the edge endpoints
    std::vector<CommunityEdge> edges;   // sorted by (u, v)
};

// An edge appears iff the pair co-occurs in cliques on >= 2 distinct trips,
// which is exactly strength >= 1.
inline CommunityGraph build_community_graph(const std::vector<AtomicGroup>& groups) {
    CommunityGraph h;
    for (const CoMembership& cm : co_memberships(groups)) {
        if (cm.per_trip.size() < 2) continue;  // single-trip pair: strength 0
        h.edges.push_back({cm.u, cm.v, connection_strength(cm)});
        h.nodes.push_back(cm.u);
        h.nodes.push_back(cm.v);
    }
    std::sort(h.nodes.begin(), h.nodes.end());
    h.nodes.erase(std::unique(h.nodes.begin(), h.nodes.end()), h.nodes.end());
    return h;
}

struct Community {
    std::uint32_t component_id = 0;
    std::vector<PassengerIdx> members;  // sorted

    bool operator==(const Community&) const = default;
};

// Drops edges below min_strength, then peels nodes below min_degree to a
// fixed point (the k-core, so the result is order-independent), and returns
// the surviving connected components, largest first (ties: smallest member).
inline std::vector<Community> extract_communities(const CommunityGraph& h,
                                                  std::uint64_t min_strength,
                                                  std::uint32_t min_degree) {
    std::unordered_map<PassengerIdx, std::uint32_t> local;
    local.reserve(h.nodes.size());
    for (const PassengerIdx p : h.nodes)
        local.emplace(p, static_cast<std::uint32_t>(local.size()));
    const std::uint32_t n = static_cast<std::uint32_t>(h.nodes.size());

    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const CommunityEdge& e : h.edges) {
        if (e.strength < min_strength) continue;
        const std::uint32_t a = local.at(e.u);
        const std::uint32_t b = local.at(e.v);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    std::vector<std::uint32_t> deg(n);
    std::vector<char> alive(n, 1);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
        deg[i] = static_cast<std::uint32_t>(adj[i].size());
        if (deg[i] < min_degree) queue.push_back(i);
    }
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        if (!alive[v]) continue;
        alive[v] = 0;
        for (const std::uint32_t w : adj[v]) {
            if (!alive[w]) continue;
            if (--deg[w] < min_degree) queue.push_back(w);
        }
    }

    std::vector<Community> out;
    std::vector<char> seen(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!alive[i] || seen[i]) continue;
        std::vector<std::uint32_t> stack{i};
        seen[i] = 1;
        Community c;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            c.members.push_back(h.nodes[v]);
            for (const std::uint32_t w : adj[v]) {
                if (!alive[w] || seen[w]) continue;
                seen[w] = 1;
                stack.push_back(w);
            }
        }
        std::sort(c.members.begin(), c.members.end());
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Community& a, const Community& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.members.front() < b.members.front();
    });
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i].component_id = i;
    return out;
}

}  // namespace transitmesh
