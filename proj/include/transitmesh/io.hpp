#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "transitmesh/cliques.hpp"
#include "transitmesh/community.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/csv.hpp"
#include "transitmesh/epidemic.hpp"
#include "transitmesh/trajectory.hpp"
#include "transitmesh/transfer.hpp"

namespace transitmesh {

// Field order in JSON artifacts matters (manifest rows follow a fixed
// column order), so all JSON goes through the order-preserving type.
using Json = nlohmann::ordered_json;

inline constexpr const char* kContactHeader = "u,v,trip_id,contact_start,duration";
inline constexpr const char* kGroupsHeader = "group_id,trip_id,member_count,members";
inline constexpr const char* kTransferHeader = "from_group,to_group,from_trip,to_trip,weight";
inline constexpr const char* kPairsHeader = "trip_i,trip_j,m";
inline constexpr const char* kCommunityHeader = "u,v,strength";

namespace detail {

inline std::uint32_t parse_u32(const CsvReader& r, const std::string& field,
                               const char* column) {
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
        value = std::stoul(field, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != field.size() || value > UINT32_MAX)
        throw ValidationError(r.location() + ": bad count in column '" +
                              std::string(column) + "': '" + field + "'");
    return static_cast<std::uint32_t>(value);
}

}  // namespace detail

// ---- contact edges CSV ----

inline std::string render_contact_csv(const ContactGraph& g) {
    std::string out = kContactHeader;
    out += '\n';
    for (const ContactEdge& e : g.edges) {
        out += g.passengers[e.u];
        out += ',';
        out += g.passengers[e.v];
        out += ',';
        out += g.trips[e.trip];
        out += ',';
        out += std::to_string(e.start);
        out += ',';
        out += std::to_string(e.duration);
        out += '\n';
    }
    return out;
}

inline void write_contact_csv(const std::string& path, const ContactGraph& g) {
    atomic_write_file(path, render_contact_csv(g));
}

struct ContactRow {
    std::string u;
    std::string v;
    std::string trip_id;
    Minutes contact_start = 0;
    Minutes duration = 0;
};

inline std::vector<ContactRow> read_contact_csv(const std::string& path) {
    CsvReader reader(path, {"u", "v", "trip_id", "contact_start", "duration"});
    std::vector<ContactRow> rows;
    std::vector<std::string> f;
    while (reader.next(f)) {
        ContactRow row;
        row.u = reader.parse_id(f[0], "u");
        row.v = reader.parse_id(f[1], "v");
        row.trip_id = reader.parse_id(f[2], "trip_id");
        row.contact_start = reader.parse_minutes(f[3], "contact_start");
        row.duration = reader.parse_minutes(f[4], "duration");
        if (row.duration < 1)
            throw ValidationError(reader.location() + ": duration must be positive");
        if (row.u == row.v)
            throw ValidationError(reader.location() + ": self-contact " + row.u);
        rows.push_back(std::move(row));
    }
    return rows;
}

// Rebuilds a ContactGraph from an exported contact CSV plus the trajectory
// legs it came from. At tau = 0 the node set is every passenger with a leg;
// at tau > 0 it is the edge endpoints (pruning drops isolated passengers).
// Memberships are the included passengers' legs.
inline ContactGraph load_contact_graph(const std::string& path,
                                       std::span<const TrajectoryLeg> legs, Minutes tau) {
    if (tau < 0) throw ValidationError("tau must be >= 0");
    const std::vector<ContactRow> rows = read_contact_csv(path);

    ContactGraph g;
    g.threshold_tau = tau;
    if (tau == 0) {
        for (const TrajectoryLeg& leg : legs) g.passengers.push_back(leg.passenger_id);
    } else {
        for (const ContactRow& r : rows) {
            g.passengers.push_back(r.u);
            g.passengers.push_back(r.v);
        }
    }
    std::sort(g.passengers.begin(), g.passengers.end());
    g.passengers.erase(std::unique(g.passengers.begin(), g.passengers.end()),
                       g.passengers.end());

    for (const TrajectoryLeg& leg : legs)
        if (g.passenger_index(leg.passenger_id)) g.trips.push_back(leg.trip_id);
    std::sort(g.trips.begin(), g.trips.end());
    g.trips.erase(std::unique(g.trips.begin(), g.trips.end()), g.trips.end());

    g.trip_legs.resize(g.trips.size());
    for (const TrajectoryLeg& leg : legs) {
        const auto p = g.passenger_index(leg.passenger_id);
        if (!p) continue;
        const auto t = g.trip_index(leg.trip_id);
        g.trip_legs[*t].push_back({*p, leg.board_time, leg.alight_time});
    }
    for (auto& tl : g.trip_legs)
        std::sort(tl.begin(), tl.end(),
                  [](const TripLeg& a, const TripLeg& b) { return a.passenger < b.passenger; });

    for (const ContactRow& r : rows) {
        const auto u = g.passenger_index(r.u);
        const auto v = g.passenger_index(r.v);
        const auto t = g.trip_index(r.trip_id);
        if (!u || !v) throw ValidationError("contact edge endpoint missing from legs: " +
                                            r.u + "," + r.v);
        if (!t) throw ValidationError("contact edge trip missing from legs: " + r.trip_id);
        ContactEdge e;
        e.u = std::min(*u, *v);
        e.v = std::max(*u, *v);
        e.trip = *t;
        e.start = r.contact_start;
        e.duration = r.duration;
        g.edges.push_back(e);
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const ContactEdge& a, const ContactEdge& b) {
        if (a.trip != b.trip) return a.trip < b.trip;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    return g;
}

// ---- atomic groups CSV ----

inline std::string render_groups_csv(const std::vector<AtomicGroup>& groups,
                                     const ContactGraph& contacts) {
    std::string out = kGroupsHeader;
    out += '\n';
    for (const AtomicGroup& g : groups) {
        out += std::to_string(g.group_id);
        out += ',';
        out += contacts.trips[g.trip];
        out += ',';
        out += std::to_string(g.members.size());
        out += ',';
        for (std::size_t i = 0; i < g.members.size(); ++i) {
            if (i) out += ';';
            out += contacts.passengers[g.members[i]];
        }
        out += '\n';
    }
    return out;
}

inline void write_groups_csv(const std::string& path, const std::vector<AtomicGroup>& groups,
                             const ContactGraph& contacts) {
    atomic_write_file(path, render_groups_csv(groups, contacts));
}

inline std::vector<AtomicGroup> load_groups(const std::string& path,
                                            const ContactGraph& contacts) {
    CsvReader reader(path, {"group_id", "trip_id", "member_count", "members"});
    std::vector<AtomicGroup> groups;
    std::unordered_set<std::uint32_t> seen_ids;
    std::vector<std::string> f;
    while (reader.next(f)) {
        AtomicGroup g;
        g.group_id = detail::parse_u32(reader, f[0], "group_id");
        if (!seen_ids.insert(g.group_id).second)
            throw ValidationError(reader.location() + ": duplicate group_id " + f[0]);
        const auto t = contacts.trip_index(reader.parse_id(f[1], "trip_id"));
        if (!t) throw ValidationError(reader.location() + ": unknown trip " + f[1]);
        g.trip = *t;
        const std::uint32_t count = detail::parse_u32(reader, f[2], "member_count");
        std::string member;
        for (std::size_t i = 0; i <= f[3].size(); ++i) {
            if (i < f[3].size() && f[3][i] != ';') {
                member.push_back(f[3][i]);
                continue;
            }
            const auto p = contacts.passenger_index(reader.parse_id(member, "members"));
            if (!p) throw ValidationError(reader.location() + ": unknown passenger " + member);
            g.members.push_back(*p);
            member.clear();
        }
        if (g.members.size() != count)
            throw ValidationError(reader.location() + ": member_count " + f[2] +
                                  " does not match " + std::to_string(g.members.size()) +
                                  " listed members");
        std::sort(g.members.begin(), g.members.end());
        if (std::adjacent_find(g.members.begin(), g.members.end()) != g.members.end())
            throw ValidationError(reader.location() + ": duplicate member in group " + f[0]);
        groups.push_back(std::move(g));
    }
    std::sort(groups.begin(), groups.end(),
              [](const AtomicGroup& a, const AtomicGroup& b) { return a.group_id < b.group_id; });
    return groups;
}

// ---- transfer network CSV ----

inline std::string render_transfer_csv(const TransferGraph& f) {
    std::string out = kTransferHeader;
    out += '\n';
    for (const TransferEdge& e : f.edges) {
        out += std::to_string(f.groups[e.from_group].group_id);
        out += ',';
        out += std::to_string(f.groups[e.to_group].group_id);
        out += ',';
        out += f.trips[e.from_trip];
        out += ',';
        out += f.trips[e.to_trip];
        out += ',';
        out += std::to_string(e.weight);
        out += '\n';
    }
    return out;
}

inline void write_transfer_csv(const std::string& path, const TransferGraph& f) {
    atomic_write_file(path, render_transfer_csv(f));
}

inline std::string render_pairs_csv(const std::vector<TripPairScore>& scores) {
    std::string out = kPairsHeader;
    out += '\n';
    for (const TripPairScore& s : scores) {
        out += s.trip_i;
        out += ',';
        out += s.trip_j;
        out += ',';
        out += std::to_string(s.m);
        out += '\n';
    }
    return out;
}

inline void write_pairs_csv(const std::string& path, const std::vector<TripPairScore>& scores) {
    atomic_write_file(path, render_pairs_csv(scores));
}

// ---- community network CSV / JSON ----

inline std::string render_community_csv(const CommunityGraph& h,
                                        const std::vector<std::string>& passenger_table) {
    std::string out = kCommunityHeader;
    out += '\n';
    for (const CommunityEdge& e : h.edges) {
        out += passenger_table[e.u];
        out += ',';
        out += passenger_table[e.v];
        out += ',';
        out += std::to_string(e.strength);
        out += '\n';
    }
    return out;
}

inline void write_community_csv(const std::string& path, const CommunityGraph& h,
                                const std::vector<std::string>& passenger_table) {
    atomic_write_file(path, render_community_csv(h, passenger_table));
}

inline CommunityGraph load_community_graph(const std::string& path,
                                           const ContactGraph& contacts) {
    CsvReader reader(path, {"u", "v", "strength"});
    CommunityGraph h;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const auto u = contacts.passenger_index(reader.parse_id(f[0], "u"));
        const auto v = contacts.passenger_index(reader.parse_id(f[1], "v"));
        if (!u || !v)
            throw ValidationError(reader.location() + ": unknown passenger in edge");
        if (*u == *v) throw ValidationError(reader.location() + ": self-edge " + f[0]);
        std::size_t pos = 0;
        unsigned long long s = 0;
        try {
            s = std::stoull(f[2], &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != f[2].size())
            throw ValidationError(reader.location() + ": bad strength '" + f[2] + "'");
        CommunityEdge e;
        e.u = std::min(*u, *v);
        e.v = std::max(*u, *v);
        e.strength = s;
        h.edges.push_back(e);
        h.nodes.push_back(e.u);
        h.nodes.push_back(e.v);
    }
    std::sort(h.edges.begin(), h.edges.end(), [](const CommunityEdge& a, const CommunityEdge& b) {
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    std::sort(h.nodes.begin(), h.nodes.end());
    h.nodes.erase(std::unique(h.nodes.begin(), h.nodes.end()), h.nodes.end());
    return h;
}

inline Json communities_json(const std::vector<Community>& communities,
                             const std::vector<std::string>& passenger_table) {
    Json arr = Json::array();
    for (const Community& c : communities) {
        Json obj;
        obj["component_id"] = c.component_id;
        Json members = Json::array();
        for (const PassengerIdx p : c.members) members.push_back(passenger_table[p]);
        obj["members"] = std::move(members);
        obj["size"] = c.members.size();
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_communities_json(const std::string& path,
                                   const std::vector<Community>& communities,
                                   const std::vector<std::string>& passenger_table) {
    atomic_write_file(path, communities_json(communities, passenger_table).dump(2) + "\n");
}

// ---- risk report JSON ----

inline Json risk_json(const Json& config, const std::vector<TripRisk>& ranked,
                      const std::vector<TripMeta>& trip_meta,
                      const std::vector<std::pair<std::string, double>>* per_passenger =
                          nullptr) {
    std::map<std::string, const TripMeta*> meta;
    for (const TripMeta& m : trip_meta) meta[m.trip_id] = &m;
    Json out;
    out["config"] = config;
    Json per_trip = Json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        Json row;
        row["trip_id"] = ranked[i].trip_id;
        const auto it = meta.find(ranked[i].trip_id);
        if (it == meta.end())
            throw ValidationError("trip missing from trip table: " + ranked[i].trip_id);
        row["route_id"] = it->second->route_id;
        row["start_time"] = it->second->start_time;
        row["score"] = ranked[i].score;
        row["rank"] = i + 1;
        per_trip.push_back(std::move(row));
    }
    out["per_trip"] = std::move(per_trip);
    if (per_passenger) {
        Json pp = Json::array();
        for (const auto& [id, likelihood] : *per_passenger) {
            Json row;
            row["passenger_id"] = id;
            row["likelihood"] = likelihood;
            pp.push_back(std::move(row));
        }
        out["per_passenger"] = std::move(pp);
    }
    return out;
}

inline void write_json(const std::string& path, const Json& j) {
    atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace transitmesh
