#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "transitmesh/cliques.hpp"
#include "transitmesh/community.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/epidemic.hpp"
#include "transitmesh/io.hpp"
#include "transitmesh/trajectory.hpp"
#include "transitmesh/transfer.hpp"

namespace transitmesh {

struct PipelineConfig {
    std::string legs_path;
    std::string trips_path;
    std::string out_dir;
    std::vector<Minutes> taus = {0, 5, 15, 30};  // first value drives the later stages
    std::size_t top_k = 5;
    std::uint64_t min_strength = 5;
    std::uint32_t min_degree = 2;
    TransmissionParams transmission;
    SiConfig si;
    bool raw_clique_benchmark = false;
    bool per_passenger = false;
};

inline void validate_pipeline_config(const PipelineConfig& cfg) {
    if (cfg.legs_path.empty()) throw ValidationError("input legs path is required");
    if (cfg.trips_path.empty()) throw ValidationError("trip table path is required");
    if (cfg.out_dir.empty()) throw ValidationError("output directory is required");
    if (cfg.taus.empty()) throw ValidationError("tau list must not be empty");
    for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
        if (cfg.taus[i] < 0) throw ValidationError("tau values must be >= 0");
        if (i > 0 && cfg.taus[i] <= cfg.taus[i - 1])
            throw ValidationError("tau values must be strictly increasing");
    }
    if (cfg.top_k < 1) throw ValidationError("top_k must be >= 1");
    validate_params(cfg.transmission);
}

struct PipelineResult {
    Dataset data;
    ContactGraph base_graph;  // thresholded at taus.front()
    std::vector<AtomicGroup> groups;
    TransferGraph transfer;
    std::vector<TripPairScore> scores;
    std::vector<TripPairScore> top_pairs;
    CommunityGraph community;
    std::vector<Community> communities;
    TransmissionWeights weights;
    RiskReport report;
    std::vector<TripRisk> ranked;
    Json manifest;
};

inline std::string graph_label(Minutes tau) { return "G" + std::to_string(tau); }

inline std::string contact_artifact_name(Minutes tau) {
    return "contact_tau" + std::to_string(tau) + ".csv";
}

// Runs ingest -> contact graphs (one per tau) -> cliques -> transfer ->
// community -> SI risk ranking, writing every artifact under cfg.out_dir.
// Later stages run on the graph thresholded at the first tau.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    validate_pipeline_config(cfg);
    namespace fs = std::filesystem;
    const auto wall0 = std::chrono::steady_clock::now();

    PipelineResult r;
    r.data = load_trajectories(cfg.legs_path, cfg.trips_path);
    const ContactGraph built = build_contact_graph(r.data.legs);

    Json graph_rows = Json::array();
    Json contact_files;
    for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
        const Minutes tau = cfg.taus[i];
        ContactGraph g = tau == 0 ? built : prune(built, tau);
        write_contact_csv((fs::path(cfg.out_dir) / contact_artifact_name(tau)).string(), g);
        contact_files[graph_label(tau)] = contact_artifact_name(tau);

        EnumerationResult enumeration = enumerate_all(g, cfg.raw_clique_benchmark);
        Json row;
        row["graph"] = graph_label(tau);
        row["tau"] = tau;
        row["passengers"] = g.passengers.size();
        row["edges"] = g.edges.size();
        row["trips"] = g.trips.size();
        row["time_raw_s"] = cfg.raw_clique_benchmark
                                ? Json(*enumeration.timing.raw_seconds)
                                : Json(nullptr);
        row["time_partitioned_s"] = enumeration.timing.partitioned_seconds;
        row["groups"] = enumeration.groups.size();
        graph_rows.push_back(std::move(row));

        if (i == 0) {
            r.base_graph = std::move(g);
            r.groups = std::move(enumeration.groups);
        }
    }

    r.transfer = build_transfer_graph(r.groups, r.base_graph, r.data.trips);
    r.scores = score_trip_pairs(r.transfer);
    r.top_pairs = top_k_pairs(r.scores, cfg.top_k);
    r.community = build_community_graph(r.groups);
    r.communities = extract_communities(r.community, cfg.min_strength, cfg.min_degree);
    r.weights = assign_weights(r.base_graph, r.community, cfg.transmission);
    r.report = run_si(r.base_graph, r.weights, cfg.si);
    r.ranked = rank_trips(r.report, r.data.legs, r.base_graph.passengers);

    const fs::path out(cfg.out_dir);
    write_groups_csv((out / "groups.csv").string(), r.groups, r.base_graph);
    write_transfer_csv((out / "transfer_edges.csv").string(), r.transfer);
    write_pairs_csv((out / "pair_scores.csv").string(), r.scores);
    write_community_csv((out / "community_edges.csv").string(), r.community,
                        r.base_graph.passengers);
    write_communities_json((out / "communities.json").string(), r.communities,
                           r.base_graph.passengers);

    Json si_config;
    si_config["tau"] = cfg.taus.front();
    si_config["iterations"] = r.report.config.iterations;
    si_config["replicates"] = r.report.config.replicates;
    si_config["seed_count"] = r.report.config.seed_count;
    si_config["rng_seed"] = r.report.config.rng_seed;
    si_config["cap"] = cfg.transmission.cap;
    si_config["lo"] = cfg.transmission.lo;
    si_config["hi"] = cfg.transmission.hi;
    si_config["base_prob"] = cfg.transmission.base_prob;
    if (!r.report.config.fixed_seeds.empty()) {
        Json seeds = Json::array();
        for (const PassengerIdx p : r.report.config.fixed_seeds)
            seeds.push_back(r.base_graph.passengers[p]);
        si_config["fixed_seeds"] = std::move(seeds);
    }
    std::vector<std::pair<std::string, double>> per_passenger;
    if (cfg.per_passenger) {
        for (std::size_t i = 0; i < r.base_graph.passengers.size(); ++i)
            per_passenger.emplace_back(r.base_graph.passengers[i], r.report.likelihood[i]);
    }
    const Json risk = risk_json(si_config, r.ranked, r.data.trips,
                                cfg.per_passenger ? &per_passenger : nullptr);
    write_json((out / "risk_report.json").string(), risk);

    const auto wall1 = std::chrono::steady_clock::now();

    Json manifest;
    manifest["tool"] = "transitmesh";
    Json input;
    input["legs"] = cfg.legs_path;
    input["trips"] = cfg.trips_path;
    input["leg_count"] = r.data.legs.size();
    std::vector<std::string> distinct;
    distinct.reserve(r.data.legs.size());
    for (const TrajectoryLeg& leg : r.data.legs) distinct.push_back(leg.passenger_id);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    input["passenger_count"] = distinct.size();
    input["trip_count"] = r.data.trips.size();
    manifest["input"] = std::move(input);
    Json config;
    Json taus = Json::array();
    for (const Minutes t : cfg.taus) taus.push_back(t);
    config["taus"] = std::move(taus);
    config["top_k"] = cfg.top_k;
    config["min_strength"] = cfg.min_strength;
    config["min_degree"] = cfg.min_degree;
    config["raw_clique_benchmark"] = cfg.raw_clique_benchmark;
    config["si"] = si_config;
    manifest["config"] = std::move(config);
    manifest["base_tau"] = cfg.taus.front();
    manifest["graphs"] = std::move(graph_rows);
    Json counts;
    counts["groups"] = r.groups.size();
    counts["transfer_edges"] = r.transfer.edges.size();
    counts["trip_pairs"] = r.scores.size();
    counts["community_nodes"] = r.community.nodes.size();
    counts["community_edges"] = r.community.edges.size();
    counts["communities"] = r.communities.size();
    counts["risk_trips"] = r.ranked.size();
    manifest["counts"] = std::move(counts);
    Json tops = Json::array();
    for (const TripPairScore& s : r.top_pairs) {
        Json row;
        row["trip_i"] = s.trip_i;
        row["trip_j"] = s.trip_j;
        row["m"] = s.m;
        tops.push_back(std::move(row));
    }
    manifest["top_pairs"] = std::move(tops);
    Json artifacts;
    artifacts["contact"] = std::move(contact_files);
    artifacts["groups"] = "groups.csv";
    artifacts["transfer_edges"] = "transfer_edges.csv";
    artifacts["pair_scores"] = "pair_scores.csv";
    artifacts["community_edges"] = "community_edges.csv";
    artifacts["communities"] = "communities.json";
    artifacts["risk_report"] = "risk_report.json";
    manifest["artifacts"] = std::move(artifacts);
    manifest["total_s"] = std::chrono::duration<double>(wall1 - wall0).count();

    write_json((out / "manifest.json").string(), manifest);
    r.manifest = std::move(manifest);
    return r;
}

}  // namespace transitmesh
