#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "transitmesh/core.hpp"
#include "transitmesh/rng.hpp"
#include "transitmesh/trajectory.hpp"

namespace transitmesh {

// Desk-scale stand-in for a transit assignment model. Passengers are
// grouped into commuter parties that board, ride and alight together;
// after each leg a party transfers to another trip with the configured
// probability, which is what gives the downstream pipeline nontrivial
// cliques and transfer edges.
struct SyntheticConfig {
    std::uint32_t passenger_count = 0;
    std::uint32_t trip_count = 0;
    double transfer_probability = 0.35;
    // group_size_weights[i] is the relative weight of party size i+1.
    std::vector<double> group_size_weights = {4.0, 3.0, 2.0, 1.0};
    std::uint64_t rng_seed = 0;
    std::uint32_t max_legs_per_passenger = 3;
};

inline void validate_config(const SyntheticConfig& cfg) {
    if (cfg.passenger_count == 0) throw ValidationError("passenger_count must be positive");
    if (cfg.trip_count == 0) throw ValidationError("trip_count must be positive");
    if (!(cfg.transfer_probability >= 0.0 && cfg.transfer_probability <= 1.0))
        throw ValidationError("transfer_probability must lie in [0,1]");
    if (cfg.group_size_weights.empty())
        throw ValidationError("group_size_weights must not be empty");
    double sum = 0.0;
    for (double w : cfg.group_size_weights) {
        if (w < 0.0) throw ValidationError("group_size_weights must be non-negative");
        sum += w;
    }
    if (sum <= 0.0) throw ValidationError("group_size_weights must have positive total");
    if (cfg.max_legs_per_passenger == 0)
        throw ValidationError("max_legs_per_passenger must be positive");
}

namespace detail {

inline std::string padded_id(char prefix, std::uint32_t n, std::size_t width) {
    std::string digits = std::to_string(n);
    std::string out(1, prefix);
    if (digits.size() < width) out.append(width - digits.size(), '0');
    out += digits;
    return out;
}

}  // namespace detail

// Deterministic for a fixed seed: same config twice gives byte-identical
// CSV output. With transfer_probability = 0 every passenger rides exactly
// one trip, so the transfer network downstream is empty.
inline Dataset generate_synthetic(const SyntheticConfig& cfg) {
    validate_config(cfg);
    detail::Rng rng(cfg.rng_seed);

    Dataset data;
    const std::size_t trip_width = std::to_string(cfg.trip_count).size();
    const std::size_t pass_width = std::to_string(cfg.passenger_count).size();

    const std::uint32_t route_count = std::max<std::uint32_t>(1, cfg.trip_count / 4);
    data.trips.reserve(cfg.trip_count);
    for (std::uint32_t t = 0; t < cfg.trip_count; ++t) {
        TripMeta meta;
        meta.trip_id = detail::padded_id('t', t + 1, trip_width);
        meta.route_id = detail::padded_id('r', (t % route_count) + 1,
                                          std::to_string(route_count).size());
        meta.start_time = 300 + static_cast<Minutes>(rng.below(960));  // 5:00 .. 21:00
        data.trips.push_back(std::move(meta));
    }

    std::uint32_t next_passenger = 0;
    while (next_passenger < cfg.passenger_count) {
        std::uint32_t size = static_cast<std::uint32_t>(rng.weighted(cfg.group_size_weights)) + 1;
        size = std::min(size, cfg.passenger_count - next_passenger);

        std::vector<std::string> party;
        party.reserve(size);
        for (std::uint32_t i = 0; i < size; ++i)
            party.push_back(detail::padded_id('p', ++next_passenger, pass_width));

        std::vector<std::uint32_t> used_trips;
        std::uint32_t trip = rng.below(cfg.trip_count);
        used_trips.push_back(trip);
        Minutes board = data.trips[trip].start_time + static_cast<Minutes>(rng.below(30));
        Minutes alight = board + 10 + static_cast<Minutes>(rng.below(36));
        for (const std::string& pid : party)
            data.legs.push_back({pid, data.trips[trip].trip_id, board, alight});

        std::uint32_t legs_made = 1;
        while (legs_made < cfg.max_legs_per_passenger &&
               used_trips.size() < cfg.trip_count &&
               rng.uniform01() < cfg.transfer_probability) {
            // Bounded retry to find a trip the party has not used yet;
            // a miss streak just ends the chain.
            std::uint32_t next_trip = 0;
            bool found = false;
            for (int attempt = 0; attempt < 16; ++attempt) {
                next_trip = rng.below(cfg.trip_count);
                if (std::find(used_trips.begin(), used_trips.end(), next_trip) ==
                    used_trips.end()) {
                    found = true;
                    break;
                }
            }
            if (!found) break;
            used_trips.push_back(next_trip);
            board = alight + 2 + static_cast<Minutes>(rng.below(9));
            alight = board + 10 + static_cast<Minutes>(rng.below(36));
            for (const std::string& pid : party)
                data.legs.push_back({pid, data.trips[next_trip].trip_id, board, alight});
            ++legs_made;
        }
    }

    std::sort(data.trips.begin(), data.trips.end(),
              [](const TripMeta& a, const TripMeta& b) { return a.trip_id < b.trip_id; });
    std::sort(data.legs.begin(), data.legs.end(), detail::leg_order);
    validate_dataset(data);
    return data;
}

}  // namespace transitmesh
