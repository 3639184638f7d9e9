#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transitmesh/community.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/parallel.hpp"
#include "transitmesh/rng.hpp"

namespace transitmesh {

struct TransmissionParams {
    std::uint64_t cap = 100;     // strengths are capped here before scaling
    double lo = 0.1;             // scaled community-pair range [lo, hi]
    double hi = 0.8;
    double base_prob = 0.05;     // contact pairs without community strength
    bool zero_min = false;       // scale from 0 instead of the observed minimum
};

// One transmission probability per unordered passenger pair that shares at
// least one contact edge; parallel per-trip contacts collapse to one link.
struct TransmissionWeights {
    std::vector<std::uint64_t> keys;  // pair_key(u, v), sorted
    std::vector<double> prob;         // aligned with keys
    TransmissionParams params;

    std::optional<double> at(PassengerIdx a, PassengerIdx b) const {
        const std::uint64_t k = a < b ? pair_key(a, b) : pair_key(b, a);
        const auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || *it != k) return std::nullopt;
        return prob[static_cast<std::size_t>(it - keys.begin())];
    }
};

inline void validate_params(const TransmissionParams& p) {
    if (p.cap < 1) throw ValidationError("cap must be >= 1");
    if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= 1.0))
        throw ValidationError("scaling range must satisfy 0 <= lo <= hi <= 1");
    if (!(p.base_prob >= 0.0 && p.base_prob <= 1.0))
        throw ValidationError("base_prob must lie in [0,1]");
}

// Community pairs get min-max-scaled capped strength in [lo, hi]; contact
// pairs outside the community network get base_prob. Every community edge
// must also be a contact pair.
inline TransmissionWeights assign_weights(const ContactGraph& contacts,
                                          const CommunityGraph& h,
                                          const TransmissionParams& params = {}) {
    validate_params(params);
    TransmissionWeights w;
    w.params = params;
    w.keys = simple_pairs(contacts);
    w.prob.assign(w.keys.size(), params.base_prob);
    if (h.edges.empty()) return w;

    std::uint64_t s_max = 0;
    std::uint64_t s_min = UINT64_MAX;
    for (const CommunityEdge& e : h.edges) {
        const std::uint64_t capped = std::min(e.strength, params.cap);
        s_max = std::max(s_max, capped);
        s_min = std::min(s_min, capped);
    }
    if (params.zero_min) s_min = 0;

    for (const CommunityEdge& e : h.edges) {
        const std::uint64_t k = pair_key(e.u, e.v);
        const auto it = std::lower_bound(w.keys.begin(), w.keys.end(), k);
        if (it == w.keys.end() || *it != k)
            throw ValidationError("community edge without a contact edge: pair (" +
                                  std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        const std::uint64_t capped = std::min(e.strength, params.cap);
        double p = params.lo;
        if (s_max > s_min)
            p += static_cast<double>(capped - s_min) * (params.hi - params.lo) /
                 static_cast<double>(s_max - s_min);
        w.prob[static_cast<std::size_t>(it - w.keys.begin())] = p;
    }
    return w;
}

struct SiConfig {
    std::uint32_t iterations = 5;
    std::uint32_t replicates = 10000;
    std::uint32_t seed_count = 100;
    std::uint64_t rng_seed = 0;
    // Non-empty: use exactly this initial infected set in every replicate
    // instead of resampling seed_count passengers per replicate.
    std::vector<PassengerIdx> fixed_seeds;
};

struct RiskReport {
    SiConfig config;
    std::vector<std::uint64_t> infected_counts;  // per passenger index
    std::vector<double> likelihood;              // infected_counts / replicates
};

namespace detail {

struct SiNetwork {
    std::vector<std::uint32_t> offsets;   // CSR over passengers
    std::vector<PassengerIdx> neighbors;  // ascending within each node
    std::vector<double> prob;
};

inline SiNetwork build_si_network(std::size_t n, const TransmissionWeights& w) {
    SiNetwork net;
    std::vector<std::uint32_t> deg(n, 0);
    for (const std::uint64_t k : w.keys) {
        ++deg[pair_key_u(k)];
        ++deg[pair_key_v(k)];
    }
    net.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) net.offsets[i + 1] = net.offsets[i] + deg[i];
    net.neighbors.resize(net.offsets[n]);
    net.prob.resize(net.offsets[n]);
    std::vector<std::uint32_t> cursor(net.offsets.begin(), net.offsets.end() - 1);
    for (std::size_t i = 0; i < w.keys.size(); ++i) {
        const PassengerIdx u = pair_key_u(w.keys[i]);
        const PassengerIdx v = pair_key_v(w.keys[i]);
        net.neighbors[cursor[u]] = v;
        net.prob[cursor[u]++] = w.prob[i];
        net.neighbors[cursor[v]] = u;
        net.prob[cursor[v]++] = w.prob[i];
    }
    return net;
}

// One SI replicate; consumes the stream deterministically (nodes ascending,
// neighbors ascending). Returns via `infected` flags.
inline void run_replicate(const SiNetwork& net, std::uint32_t n,
                          const std::vector<PassengerIdx>& seeds,
                          std::uint32_t iterations, Rng& rng,
                          std::vector<std::uint8_t>& infected,
                          std::vector<PassengerIdx>& newly) {
    infected.assign(n, 0);
    for (const PassengerIdx s : seeds) infected[s] = 1;
    for (std::uint32_t round = 0; round < iterations; ++round) {
        newly.clear();
        bool attempted = false;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (infected[u] != 1) continue;  // nodes marked 2 spread next round
            for (std::uint32_t e = net.offsets[u]; e < net.offsets[u + 1]; ++e) {
                const PassengerIdx v = net.neighbors[e];
                if (infected[v]) continue;  // includes nodes marked this round
                attempted = true;
                if (rng.uniform01() < net.prob[e]) {
                    infected[v] = 2;  // infectious from the next round on
                    newly.push_back(v);
                }
            }
        }
        for (const PassengerIdx v : newly) infected[v] = 1;
        if (!attempted) break;  // no susceptible is reachable any more
    }
}

}  // namespace detail

// Monte-Carlo SI simulation. Each replicate samples its initial infected
// set (unless fixed), then runs `iterations` synchronous rounds where every
// infected passenger attempts each susceptible neighbor independently.
// Replicates run on independent RNG streams derived from rng_seed and the
// replicate index, so results are bit-identical for a fixed seed regardless
// of worker count.
inline RiskReport run_si(const ContactGraph& contacts, const TransmissionWeights& weights,
                         const SiConfig& config) {
    const std::uint32_t n = static_cast<std::uint32_t>(contacts.passengers.size());
    if (config.iterations < 1) throw ValidationError("iterations must be positive");
    if (config.replicates < 1) throw ValidationError("replicates must be positive");
    if (config.fixed_seeds.empty()) {
        if (config.seed_count < 1) throw ValidationError("seed_count must be positive");
        if (config.seed_count > n)
            throw ValidationError("seed_count exceeds passenger count");
    } else {
        std::vector<PassengerIdx> s = config.fixed_seeds;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw ValidationError("fixed seeds must be distinct");
        if (!s.empty() && s.back() >= n)
            throw ValidationError("fixed seed out of range");
    }
    if (weights.keys != simple_pairs(contacts))
        throw ValidationError("weights do not cover the contact graph's pairs");

    const detail::SiNetwork net = detail::build_si_network(n, weights);
    const std::uint64_t base = detail::mix64(config.rng_seed);

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), config.replicates));
    std::vector<std::vector<std::uint64_t>> shard_counts(workers,
                                                         std::vector<std::uint64_t>(n, 0));
    parallel_for(
        workers,
        [&](std::size_t shard) {
            const std::uint64_t lo = config.replicates * shard / workers;
            const std::uint64_t hi = config.replicates * (shard + 1) / workers;
            std::vector<std::uint64_t>& counts = shard_counts[shard];
            std::vector<std::uint8_t> infected;
            std::vector<PassengerIdx> newly;
            std::vector<PassengerIdx> perm(n);
            std::vector<PassengerIdx> seeds;
            for (std::uint64_t r = lo; r < hi; ++r) {
                detail::Rng rng(detail::mix64(base + r));
                if (config.fixed_seeds.empty()) {
                    // partial Fisher-Yates for seed_count distinct nodes
                    for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
                    seeds.clear();
                    for (std::uint32_t i = 0; i < config.seed_count; ++i) {
                        const std::uint32_t j = i + rng.below(n - i);
                        std::swap(perm[i], perm[j]);
                        seeds.push_back(perm[i]);
                    }
                } else {
                    seeds = config.fixed_seeds;
                }
                detail::run_replicate(net, n, seeds, config.iterations, rng, infected, newly);
                for (std::uint32_t i = 0; i < n; ++i)
                    if (infected[i]) ++counts[i];
            }
        },
        workers);

    RiskReport report;
    report.config = config;
    report.infected_counts.assign(n, 0);
    for (const auto& counts : shard_counts)
        for (std::uint32_t i = 0; i < n; ++i) report.infected_counts[i] += counts[i];
    report.likelihood.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        report.likelihood[i] =
            static_cast<double>(report.infected_counts[i]) / config.replicates;
    return report;
}

struct TripRisk {
    std::string trip_id;
    double score = 0.0;

    bool operator==(const TripRisk&) const = default;
};

// Per-trip risk: sum of member likelihoods over the trip's legs. Passengers
// absent from the report (e.g. pruned from the contact graph) contribute 0.
// Sorted by score descending, ties by trip id.
inline std::vector<TripRisk> rank_trips(const RiskReport& report,
                                        std::span<const TrajectoryLeg> legs,
                                        const std::vector<std::string>& passenger_table) {
    std::map<std::string, double> score;
    for (const TrajectoryLeg& leg : legs) {
        double& s = score[leg.trip_id];
        const auto it = std::lower_bound(passenger_table.begin(), passenger_table.end(),
                                         leg.passenger_id);
        if (it != passenger_table.end() && *it == leg.passenger_id) {
            const auto idx = static_cast<std::size_t>(it - passenger_table.begin());
            if (idx < report.likelihood.size()) s += report.likelihood[idx];
        }
    }
    std::vector<TripRisk> out;
    out.reserve(score.size());
    for (const auto& [trip, s] : score) out.push_back({trip, s});
    std::sort(out.begin(), out.end(), [](const TripRisk& a, const TripRisk& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.trip_id < b.trip_id;
    });
    return out;
}

}  // namespace transitmesh
