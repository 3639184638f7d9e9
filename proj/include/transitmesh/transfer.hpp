#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "transitmesh/cliques.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/trajectory.hpp"

namespace transitmesh {

// Directed edge between two atomic groups on different trips. `shared` is
// the set of passengers belonging to both groups; weight = |shared|.
struct TransferEdge {
    std::uint32_t from_group = 0;
    std::uint32_t to_group = 0;
    TripIdx from_trip = 0;
    TripIdx to_trip = 0;
    std::uint32_t weight = 0;
    std::vector<PassengerIdx> shared;

    bool operator==(const TransferEdge&) const = default;
};

// Transfer network F. Nodes are the atomic groups (node weight = member
// count); edges point along the transfer. Id tables are copied from the
// contact graph so the structure is self-contained.
struct TransferGraph {
    std::vector<AtomicGroup> groups;
    std::vector<TransferEdge> edges;  // sorted by (from_group, to_group)
    std::vector<std::string> passengers;
    std::vector<std::string> trips;
};

struct TripPairScore {
    std::string trip_i;  // trip_i < trip_j lexicographically
    std::string trip_j;
    std::uint64_t m = 0;

    bool operator==(const TripPairScore&) const = default;
};

namespace detail {

// Earliest contact start on trip t among all pairs drawn from `within`.
inline std::optional<Minutes> min_pair_start(const ContactGraph& g, TripIdx t,
                                             const std::vector<PassengerIdx>& within) {
    std::optional<Minutes> best;
    for (std::size_t i = 0; i < within.size(); ++i) {
        for (std::size_t j = i + 1; j < within.size(); ++j) {
            const auto s = g.contact_start(t, within[i], within[j]);
            if (s && (!best || *s < *best)) best = *s;
        }
    }
    return best;
}

// Earliest contact start on trip t between anchor p0 and any other member.
inline std::optional<Minutes> min_anchor_start(const ContactGraph& g, TripIdx t,
                                               PassengerIdx p0,
                                               const std::vector<PassengerIdx>& members) {
    std::optional<Minutes> best;
    for (const PassengerIdx p : members) {
        if (p == p0) continue;
        const auto s = g.contact_start(t, p0, p);
        if (s && (!best || *s < *best)) best = *s;
    }
    return best;
}

}  // namespace detail

// Builds the directed transfer network. For every pair of groups on
// different trips sharing at least one passenger, one edge is emitted whose
// direction follows the time rule: earliest contact start among shared-pair
// contacts decides; with a single shared passenger p0, the minima are taken
// over p0's contacts to the rest of each group; when a minimum does not
// exist (singleton group), p0's boarding times decide; remaining ties fall
// back to trip start_time, then lexicographic trip id.
inline TransferGraph build_transfer_graph(const std::vector<AtomicGroup>& groups,
                                          const ContactGraph& contacts,
                                          const std::vector<TripMeta>& trip_meta) {
    TransferGraph f;
    f.groups = groups;
    f.passengers = contacts.passengers;
    f.trips = contacts.trips;

    std::unordered_map<std::string, Minutes> meta_start;
    meta_start.reserve(trip_meta.size());
    for (const TripMeta& m : trip_meta) meta_start.emplace(m.trip_id, m.start_time);
    std::vector<Minutes> trip_start(contacts.trips.size());
    for (std::size_t t = 0; t < contacts.trips.size(); ++t) {
        const auto it = meta_start.find(contacts.trips[t]);
        if (it == meta_start.end())
            throw ValidationError("trip missing from trip table: " + contacts.trips[t]);
        trip_start[t] = it->second;
    }

    // Only groups sharing a passenger can connect; invert membership.
    std::vector<std::vector<std::uint32_t>> groups_of(contacts.passengers.size());
    for (std::uint32_t gi = 0; gi < groups.size(); ++gi)
        for (const PassengerIdx p : groups[gi].members) groups_of[p].push_back(gi);

    std::map<std::uint64_t, std::vector<PassengerIdx>> shared_by_pair;
    for (PassengerIdx p = 0; p < groups_of.size(); ++p) {
        const auto& gs = groups_of[p];
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = i + 1; j < gs.size(); ++j) {
                if (groups[gs[i]].trip == groups[gs[j]].trip) continue;
                shared_by_pair[pair_key(gs[i], gs[j])].push_back(p);
            }
        }
    }

    for (const auto& [key, shared] : shared_by_pair) {
        const std::uint32_t gi = pair_key_u(key);
        const std::uint32_t gj = pair_key_v(key);
        const AtomicGroup& gu = groups[gi];
        const AtomicGroup& gv = groups[gj];

        std::optional<Minutes> mu, mv;
        if (shared.size() >= 2) {
            mu = detail::min_pair_start(contacts, gu.trip, shared);
            mv = detail::min_pair_start(contacts, gv.trip, shared);
        } else {
            mu = detail::min_anchor_start(contacts, gu.trip, shared.front(), gu.members);
            mv = detail::min_anchor_start(contacts, gv.trip, shared.front(), gv.members);
        }

        int dir = 0;  // +1: gi -> gj, -1: gj -> gi, 0: undecided
        if (mu && mv) {
            if (*mu < *mv) dir = 1;
            else if (*mv < *mu) dir = -1;
        } else {
            // No contacts to compare around the shared passenger: the
            // transfer's physical direction comes from boarding order.
            const auto bu = contacts.board_time(gu.trip, shared.front());
            const auto bv = contacts.board_time(gv.trip, shared.front());
            if (bu && bv) {
                if (*bu < *bv) dir = 1;
                else if (*bv < *bu) dir = -1;
            }
        }
        if (dir == 0) {
            const Minutes su = trip_start[gu.trip];
            const Minutes sv = trip_start[gv.trip];
            if (su != sv) dir = su < sv ? 1 : -1;
            else dir = contacts.trips[gu.trip] < contacts.trips[gv.trip] ? 1 : -1;
        }

        TransferEdge e;
        e.from_group = dir > 0 ? gi : gj;
        e.to_group = dir > 0 ? gj : gi;
        e.from_trip = groups[e.from_group].trip;
        e.to_trip = groups[e.to_group].trip;
        e.weight = static_cast<std::uint32_t>(shared.size());
        e.shared = shared;
        f.edges.push_back(std::move(e));
    }
    std::sort(f.edges.begin(), f.edges.end(), [](const TransferEdge& a, const TransferEdge& b) {
        if (a.from_group != b.from_group) return a.from_group < b.from_group;
        return a.to_group < b.to_group;
    });
    return f;
}

// Trip-pair traffic scores: m sums the weights of every transfer edge whose
// endpoints belong to the two trips, in either direction. Sorted by m
// descending, then lexicographic trip-id pair.
inline std::vector<TripPairScore> score_trip_pairs(const TransferGraph& f) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> acc;
    for (const TransferEdge& e : f.edges) {
        std::string a = f.trips[e.from_trip];
        std::string b = f.trips[e.to_trip];
        if (b < a) std::swap(a, b);
        acc[{std::move(a), std::move(b)}] += e.weight;
    }
    std::vector<TripPairScore> out;
    out.reserve(acc.size());
    for (const auto& [pair, m] : acc) out.push_back({pair.first, pair.second, m});
    std::sort(out.begin(), out.end(), [](const TripPairScore& a, const TripPairScore& b) {
        if (a.m != b.m) return a.m > b.m;
        if (a.trip_i != b.trip_i) return a.trip_i < b.trip_i;
        return a.trip_j < b.trip_j;
    });
    return out;
}

inline std::vector<TripPairScore> top_k_pairs(const std::vector<TripPairScore>& scores,
                                              std::size_t k) {
    if (k < 1) throw ValidationError("top_k must be >= 1");
    const std::size_t n = std::min(k, scores.size());
    return {scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace transitmesh
