#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transitmesh/core.hpp"
#include "transitmesh/trajectory.hpp"

namespace transitmesh {

// Membership row: one passenger's on-board interval on one trip.
struct TripLeg {
    PassengerIdx passenger = 0;
    Minutes board = 0;
    Minutes alight = 0;
};

// Co-presence of two passengers on one vehicle trip. Stored once per
// unordered pair per trip with u < v; the contact relation is symmetric.
struct ContactEdge {
    PassengerIdx u = 0;
    PassengerIdx v = 0;
    TripIdx trip = 0;
    Minutes start = 0;     // max of the two board times
    Minutes duration = 0;  // min alight - start, always > 0

    friend bool operator==(const ContactEdge&, const ContactEdge&) = default;
};

// Temporal contact network. Passenger and trip tables are sorted, so an
// index comparison is the same as comparing ids. Membership rows are kept
// alongside the edges because per-trip subgraphs also contain passengers
// whose contacts on that trip did not survive (or never existed).
struct ContactGraph {
    std::vector<std::string> passengers;          // sorted, unique
    std::vector<std::string> trips;               // sorted, unique
    std::vector<std::vector<TripLeg>> trip_legs;  // by TripIdx, sorted by passenger
    std::vector<ContactEdge> edges;               // sorted by (trip, u, v)
    Minutes threshold_tau = 0;

    std::size_t node_count() const { return passengers.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t trip_count() const { return trips.size(); }

    std::optional<PassengerIdx> passenger_index(const std::string& id) const {
        auto it = std::lower_bound(passengers.begin(), passengers.end(), id);
        if (it == passengers.end() || *it != id) return std::nullopt;
        return static_cast<PassengerIdx>(it - passengers.begin());
    }

    std::optional<TripIdx> trip_index(const std::string& id) const {
        auto it = std::lower_bound(trips.begin(), trips.end(), id);
        if (it == trips.end() || *it != id) return std::nullopt;
        return static_cast<TripIdx>(it - trips.begin());
    }

    // Contact start time between u and v on a trip, if they met there.
    std::optional<Minutes> contact_start(TripIdx trip, PassengerIdx a, PassengerIdx b) const {
        if (a > b) std::swap(a, b);
        auto key_less = [](const ContactEdge& e, const ContactEdge& probe) {
            if (e.trip != probe.trip) return e.trip < probe.trip;
            if (e.u != probe.u) return e.u < probe.u;
            return e.v < probe.v;
        };
        ContactEdge probe{a, b, trip, 0, 0};
        auto it = std::lower_bound(edges.begin(), edges.end(), probe, key_less);
        if (it == edges.end() || it->trip != trip || it->u != a || it->v != b)
            return std::nullopt;
        return it->start;
    }

    std::optional<Minutes> board_time(TripIdx trip, PassengerIdx p) const {
        const auto& rows = trip_legs[trip];
        auto it = std::lower_bound(rows.begin(), rows.end(), p,
                                   [](const TripLeg& r, PassengerIdx x) { return r.passenger < x; });
        if (it == rows.end() || it->passenger != p) return std::nullopt;
        return it->board;
    }
};

// Distinct unordered passenger pairs with at least one contact, as
// pair_key values, sorted.
inline std::vector<std::uint64_t> simple_pairs(const ContactGraph& g) {
    std::vector<std::uint64_t> keys;
    keys.reserve(g.edges.size());
    for (const ContactEdge& e : g.edges) keys.push_back(pair_key(e.u, e.v));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

// Builds the unpruned contact network (threshold_tau = 0). Two passengers
// are in contact on a trip iff their on-board intervals strictly overlap:
// start = max of board times, duration = min of alight times - start > 0.
// Touching endpoints produce no contact.
inline ContactGraph build_contact_graph(std::span<const TrajectoryLeg> legs) {
    ContactGraph g;

    for (const TrajectoryLeg& leg : legs) {
        g.passengers.push_back(leg.passenger_id);
        g.trips.push_back(leg.trip_id);
    }
    std::sort(g.passengers.begin(), g.passengers.end());
    g.passengers.erase(std::unique(g.passengers.begin(), g.passengers.end()),
                       g.passengers.end());
    std::sort(g.trips.begin(), g.trips.end());
    g.trips.erase(std::unique(g.trips.begin(), g.trips.end()), g.trips.end());

    g.trip_legs.resize(g.trips.size());
    for (const TrajectoryLeg& leg : legs) {
        const TripIdx t = *g.trip_index(leg.trip_id);
        const PassengerIdx p = *g.passenger_index(leg.passenger_id);
        g.trip_legs[t].push_back({p, leg.board_time, leg.alight_time});
    }

    for (TripIdx t = 0; t < g.trip_legs.size(); ++t) {
        auto& rows = g.trip_legs[t];
        // Sweep in boarding order: for row i, every later row j overlaps
        // iff it boards before i alights.
        std::vector<TripLeg> by_board(rows);
        std::sort(by_board.begin(), by_board.end(), [](const TripLeg& a, const TripLeg& b) {
            if (a.board != b.board) return a.board < b.board;
            return a.passenger < b.passenger;
        });
        std::vector<ContactEdge> trip_edges;
        for (std::size_t i = 0; i < by_board.size(); ++i) {
            for (std::size_t j = i + 1; j < by_board.size(); ++j) {
                if (by_board[j].board >= by_board[i].alight) break;
                const Minutes start = by_board[j].board;
                const Minutes end = std::min(by_board[i].alight, by_board[j].alight);
                ContactEdge e;
                e.u = std::min(by_board[i].passenger, by_board[j].passenger);
                e.v = std::max(by_board[i].passenger, by_board[j].passenger);
                e.trip = t;
                e.start = start;
                e.duration = end - start;
                trip_edges.push_back(e);
            }
        }
        std::sort(trip_edges.begin(), trip_edges.end(),
                  [](const ContactEdge& a, const ContactEdge& b) {
                      if (a.u != b.u) return a.u < b.u;
                      return a.v < b.v;
                  });
        g.edges.insert(g.edges.end(), trip_edges.begin(), trip_edges.end());

        std::sort(rows.begin(), rows.end(), [](const TripLeg& a, const TripLeg& b) {
            return a.passenger < b.passenger;
        });
    }
    return g;
}

// Keeps edges with duration >= tau ("below tau" is omitted), then drops
// nodes left with no edges at all, together with their membership rows.
// The result is a compact graph with re-indexed tables.
inline ContactGraph prune(const ContactGraph& g, Minutes tau) {
    if (tau < 0) throw ValidationError("pruning threshold must be >= 0");

    std::vector<char> keep_passenger(g.passengers.size(), 0);
    std::vector<const ContactEdge*> kept_edges;
    kept_edges.reserve(g.edges.size());
    for (const ContactEdge& e : g.edges) {
        if (e.duration >= tau) {
            kept_edges.push_back(&e);
            keep_passenger[e.u] = 1;
            keep_passenger[e.v] = 1;
        }
    }

    ContactGraph out;
    out.threshold_tau = tau;

    std::vector<PassengerIdx> passenger_map(g.passengers.size(), 0);
    for (std::size_t i = 0; i < g.passengers.size(); ++i) {
        if (keep_passenger[i]) {
            passenger_map[i] = static_cast<PassengerIdx>(out.passengers.size());
            out.passengers.push_back(g.passengers[i]);
        }
    }

    // A trip stays alive if a surviving passenger has a leg on it, even
    // when all of its own contacts were pruned away.
    std::vector<char> keep_trip(g.trips.size(), 0);
    for (TripIdx t = 0; t < g.trip_legs.size(); ++t)
        for (const TripLeg& row : g.trip_legs[t])
            if (keep_passenger[row.passenger]) keep_trip[t] = 1;

    std::vector<TripIdx> trip_map(g.trips.size(), 0);
    for (std::size_t t = 0; t < g.trips.size(); ++t) {
        if (keep_trip[t]) {
            trip_map[t] = static_cast<TripIdx>(out.trips.size());
            out.trips.push_back(g.trips[t]);
        }
    }

    out.trip_legs.resize(out.trips.size());
    for (TripIdx t = 0; t < g.trip_legs.size(); ++t) {
        if (!keep_trip[t]) continue;
        for (const TripLeg& row : g.trip_legs[t])
            if (keep_passenger[row.passenger])
                out.trip_legs[trip_map[t]].push_back(
                    {passenger_map[row.passenger], row.board, row.alight});
    }

    out.edges.reserve(kept_edges.size());
    for (const ContactEdge* e : kept_edges) {
        ContactEdge ne = *e;
        ne.u = passenger_map[e->u];
        ne.v = passenger_map[e->v];
        ne.trip = trip_map[e->trip];
        out.edges.push_back(ne);
    }
    // Index maps are monotone, so the (trip, u, v) edge order is preserved.
    return out;
}

// Degree histogram over distinct neighbor passengers: parallel per-trip
// edges to the same neighbor count once. Keys are degrees, values node
// counts; isolated nodes land in the 0 bucket.
inline std::map<std::size_t, std::size_t> degree_distribution(const ContactGraph& g) {
    std::vector<std::size_t> degree(g.passengers.size(), 0);
    for (std::uint64_t key : simple_pairs(g)) {
        ++degree[pair_key_u(key)];
        ++degree[pair_key_v(key)];
    }
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t d : degree) ++hist[d];
    return hist;
}

}  // namespace transitmesh
