#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "transitmesh/core.hpp"
#include "transitmesh/csv.hpp"

namespace transitmesh {

// One passenger's presence on one vehicle trip. Walking and waiting
// segments are not modeled; only on-vehicle legs carry contacts.
struct TrajectoryLeg {
    std::string passenger_id;
    std::string trip_id;
    Minutes board_time = 0;   // >= 0
    Minutes alight_time = 0;  // > board_time

    friend bool operator==(const TrajectoryLeg&, const TrajectoryLeg&) = default;
};

// A vehicle trip: a single vehicle traveling a specific route with a
// specific start time.
struct TripMeta {
    std::string trip_id;
    std::string route_id;
    Minutes start_time = 0;

    friend bool operator==(const TripMeta&, const TripMeta&) = default;
};

struct Dataset {
    std::vector<TrajectoryLeg> legs;   // sorted by (passenger_id, board_time)
    std::vector<TripMeta> trips;       // sorted by trip_id
};

namespace detail {

inline bool leg_order(const TrajectoryLeg& a, const TrajectoryLeg& b) {
    if (a.passenger_id != b.passenger_id) return a.passenger_id < b.passenger_id;
    if (a.board_time != b.board_time) return a.board_time < b.board_time;
    return a.trip_id < b.trip_id;
}

}  // namespace detail

// Checks every dataset invariant: leg intervals are positive, ids are
// well-formed, trip ids are unique, every referenced trip has a meta
// record, and no (passenger, trip) pair occurs twice. A passenger may
// not ride the same trip twice in one service day.
inline void validate_dataset(const Dataset& data) {
    std::unordered_set<std::string> trip_ids;
    trip_ids.reserve(data.trips.size());
    for (const TripMeta& t : data.trips) {
        if (!valid_id(t.trip_id)) throw ValidationError("invalid trip id '" + t.trip_id + "'");
        if (!valid_id(t.route_id))
            throw ValidationError("invalid route id '" + t.route_id + "' on trip " + t.trip_id);
        if (!trip_ids.insert(t.trip_id).second)
            throw ValidationError("duplicate trip id '" + t.trip_id + "'");
    }
    std::unordered_set<std::string> seen_pt;
    seen_pt.reserve(data.legs.size());
    for (const TrajectoryLeg& leg : data.legs) {
        if (!valid_id(leg.passenger_id))
            throw ValidationError("invalid passenger id '" + leg.passenger_id + "'");
        if (!valid_id(leg.trip_id))
            throw ValidationError("invalid trip id '" + leg.trip_id + "'");
        if (leg.board_time < 0)
            throw ValidationError("negative board time for passenger " + leg.passenger_id +
                                  " on trip " + leg.trip_id);
        if (leg.alight_time <= leg.board_time)
            throw ValidationError("alight time must exceed board time for passenger " +
                                  leg.passenger_id + " on trip " + leg.trip_id);
        if (!trip_ids.count(leg.trip_id))
            throw ValidationError("leg of passenger " + leg.passenger_id +
                                  " references unknown trip '" + leg.trip_id + "'");
        // '\x1f' cannot occur in a valid id, so the join is unambiguous.
        if (!seen_pt.insert(leg.passenger_id + '\x1f' + leg.trip_id).second)
            throw ValidationError("passenger " + leg.passenger_id +
                                  " appears twice on trip " + leg.trip_id);
    }
}

inline const std::vector<std::string> kLegHeader = {"passenger_id", "trip_id",
                                                    "board_time", "alight_time"};
inline const std::vector<std::string> kTripHeader = {"trip_id", "route_id", "start_time"};

// Loads and validates the trajectory and trip CSV files. Legs come back
// sorted by (passenger_id, board_time); trips by trip_id.
inline Dataset load_trajectories(const std::string& legs_path, const std::string& trips_path) {
    Dataset data;

    CsvReader trips(trips_path, kTripHeader);
    std::vector<std::string> f;
    while (trips.next(f)) {
        TripMeta meta;
        meta.trip_id = trips.parse_id(f[0], "trip_id");
        meta.route_id = trips.parse_id(f[1], "route_id");
        meta.start_time = trips.parse_minutes(f[2], "start_time");
        data.trips.push_back(std::move(meta));
    }

    CsvReader legs(legs_path, kLegHeader);
    while (legs.next(f)) {
        TrajectoryLeg leg;
        leg.passenger_id = legs.parse_id(f[0], "passenger_id");
        leg.trip_id = legs.parse_id(f[1], "trip_id");
        leg.board_time = legs.parse_minutes(f[2], "board_time");
        leg.alight_time = legs.parse_minutes(f[3], "alight_time");
        if (leg.board_time < 0)
            throw ValidationError(legs.location() + ": board_time must be >= 0");
        if (leg.alight_time <= leg.board_time)
            throw ValidationError(legs.location() + ": alight_time must exceed board_time");
        data.legs.push_back(std::move(leg));
    }

    std::sort(data.trips.begin(), data.trips.end(),
              [](const TripMeta& a, const TripMeta& b) { return a.trip_id < b.trip_id; });
    std::sort(data.legs.begin(), data.legs.end(), detail::leg_order);
    validate_dataset(data);
    return data;
}

inline std::string render_legs_csv(std::span<const TrajectoryLeg> legs) {
    std::string out = "passenger_id,trip_id,board_time,alight_time\n";
    std::vector<TrajectoryLeg> sorted(legs.begin(), legs.end());
    std::sort(sorted.begin(), sorted.end(), detail::leg_order);
    for (const TrajectoryLeg& leg : sorted) {
        out += leg.passenger_id;
        out += ',';
        out += leg.trip_id;
        out += ',';
        out += std::to_string(leg.board_time);
        out += ',';
        out += std::to_string(leg.alight_time);
        out += '\n';
    }
    return out;
}

inline std::string render_trips_csv(std::span<const TripMeta> trips) {
    std::string out = "trip_id,route_id,start_time\n";
    std::vector<TripMeta> sorted(trips.begin(), trips.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const TripMeta& a, const TripMeta& b) { return a.trip_id < b.trip_id; });
    for (const TripMeta& t : sorted) {
        out += t.trip_id;
        out += ',';
        out += t.route_id;
        out += ',';
        out += std::to_string(t.start_time);
        out += '\n';
    }
    return out;
}

// Inverse of load_trajectories up to row order.
inline void write_trajectories(const Dataset& data, const std::string& legs_path,
                               const std::string& trips_path) {
    atomic_write_file(legs_path, render_legs_csv(data.legs));
    atomic_write_file(trips_path, render_trips_csv(data.trips));
}

}  // namespace transitmesh
