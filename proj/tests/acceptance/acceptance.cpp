// End-to-end acceptance checks. Each criterion prints one [PASS] line or
// dies with [FAIL] and a nonzero exit; wall-clock budgets are enforced.
// Reference values are recomputed here with deliberately dumb algorithms
// (subset scans, getline parsing) that share nothing with the library.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "transitmesh/cliques.hpp"
#include "transitmesh/community.hpp"
#include "transitmesh/contact_graph.hpp"
#include "transitmesh/epidemic.hpp"
#include "transitmesh/io.hpp"
#include "transitmesh/synthetic.hpp"
#include "transitmesh/trajectory.hpp"
#include "transitmesh/transfer.hpp"

#include "../oracles.hpp"

namespace fs = std::filesystem;
using namespace transitmesh;

namespace {

const char* g_criterion = "";

// Always-on requirement: never compiled out in Release.
#define REQUIRE(cond, msg)                                                         \
    do {                                                                           \
        if (!(cond)) {                                                             \
            std::cerr << "[FAIL] " << g_criterion << " — " << msg << " ("          \
                      << __FILE__ << ":" << __LINE__ << ")\n";                     \
            std::exit(1);                                                          \
        }                                                                          \
    } while (0)

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Body>
void criterion(const char* label, double budget_s, Body&& body) {
    g_criterion = label;
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double elapsed = seconds_since(t0);
    if (elapsed >= budget_s) {
        std::cerr << "[FAIL] " << label << " — took " << elapsed << "s, budget "
                  << budget_s << "s\n";
        std::exit(1);
    }
    std::printf("[PASS] %s (%.3fs, budget %gs)\n", label, elapsed, budget_s);
}

// Deterministic helpers, independent of the library's sampling layer.
std::uint32_t below(std::mt19937_64& e, std::uint32_t bound) {
    return static_cast<std::uint32_t>(((e() >> 32) * bound) >> 32);
}

std::string pad(std::uint32_t n, int width) {
    std::string s = std::to_string(n);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

std::set<std::set<std::string>> name_sets(const std::vector<std::vector<std::uint32_t>>& cliques,
                                          const std::vector<std::string>& table) {
    std::set<std::set<std::string>> out;
    for (const auto& c : cliques) {
        std::set<std::string> s;
        for (const std::uint32_t v : c) s.insert(table[v]);
        out.insert(std::move(s));
    }
    return out;
}

std::set<std::set<std::string>> group_name_sets(const std::vector<AtomicGroup>& groups,
                                                const std::vector<std::string>& table) {
    std::set<std::set<std::string>> out;
    for (const AtomicGroup& g : groups) {
        std::set<std::string> s;
        for (const PassengerIdx v : g.members) s.insert(table[v]);
        out.insert(std::move(s));
    }
    return out;
}

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TRANSITMESH_CLI_PATH) + " " + args + " 2>&1";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr, "popen failed");
    char buf[4096];
    while (fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.is_open(), "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

// Data rows of a CSV (header skipped), parsed with nothing but getline.
std::vector<std::vector<std::string>> csv_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.is_open(), "cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        rows.push_back(split(line));
    }
    return rows;
}

// ---------------------------------------------------------------------------

// 1. Connection-strength worked values: exact integers from the three
// reference co-membership profiles.
void criterion_strength_values() {
    const CoMembership two_trips{0, 1, 3, {{0, 2}, {1, 1}}};
    const CoMembership heavier{0, 1, 5, {{2, 3}, {3, 2}}};
    const CoMembership single_trip{0, 1, 4, {{0, 4}}};
    REQUIRE(connection_strength(two_trips) == 2, "{2,1} must score 2");
    REQUIRE(connection_strength(heavier) == 6, "{3,2} must score 6");
    REQUIRE(connection_strength(single_trip) == 0, "single-trip pair must score 0");
}

// 2. Closed form vs cross-trip product sum on 1000 random profiles.
void criterion_strength_identity() {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 1000; ++round) {
        const std::uint32_t trips = 1 + below(rng, 6);
        CoMembership cm;
        std::vector<std::uint32_t> counts;
        for (std::uint32_t t = 0; t < trips; ++t) {
            const std::uint32_t c = 1 + below(rng, 10);
            cm.per_trip.emplace_back(t, c);
            cm.g_total += c;
            counts.push_back(c);
        }
        REQUIRE(connection_strength(cm) == oracles::strength_cross_product(counts),
                "closed form != cross-trip product sum");
    }
}

// 3. Per-trip cliques: recursive enumeration == subset scan == interval sweep
// on 500 random single-trip leg sets.
void criterion_clique_oracle() {
    std::mt19937_64 rng(33);
    for (int round = 0; round < 500; ++round) {
        const std::uint32_t n = 2 + below(rng, 14);
        std::vector<TrajectoryLeg> legs;
        for (std::uint32_t i = 0; i < n; ++i) {
            const Minutes board = static_cast<Minutes>(below(rng, 200));
            const Minutes dur = 1 + static_cast<Minutes>(below(rng, 60));
            legs.push_back({"p" + pad(i, 2), "t1", board, board + dur});
        }
        std::sort(legs.begin(), legs.end(), detail::leg_order);

        const ContactGraph g = build_contact_graph(legs);
        const std::vector<TripSubgraph> subs = partition(g);
        REQUIRE(subs.size() == 1, "single trip expected");
        const auto via_bk = group_name_sets(bron_kerbosch(subs[0]), g.passengers);

        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t j = i + 1; j < n; ++j) {
                const Minutes overlap = std::min(legs[i].alight_time, legs[j].alight_time) -
                                        std::max(legs[i].board_time, legs[j].board_time);
                adj[i][j] = adj[j][i] = overlap > 0;
            }
        }
        // legs are sorted by passenger id, so leg index == table index
        const auto via_subsets = name_sets(oracles::brute_force_cliques(n, adj), g.passengers);

        const IntervalCliqueSet sweep = interval_cliques(legs, 0);
        REQUIRE(sweep.passengers == g.passengers, "sweep passenger table mismatch");
        const auto via_sweep = group_name_sets(sweep.groups, sweep.passengers);

        REQUIRE(via_bk == via_subsets, "recursive enumeration != subset scan");
        REQUIRE(via_bk == via_sweep, "recursive enumeration != interval sweep");
    }
}

// 4. Partitioned enumeration must beat whole-graph enumeration on a 405-trip,
// 50-passengers-per-trip instance whose collapsed graph hides a Moon-Moser
// pattern (3^10 extra maximal cliques that per-trip enumeration never sees).
void criterion_partitioned_speedup() {
    std::vector<TrajectoryLeg> legs;
    std::uint32_t trip_no = 0;
    for (std::uint32_t u = 0; u < 30; ++u) {
        for (std::uint32_t v = u + 1; v < 30; ++v) {
            if (u / 3 == v / 3) continue;  // triples stay non-adjacent
            const std::string trip = "m" + pad(trip_no, 3);
            legs.push_back({"s" + pad(u, 2), trip, 100, 160});
            legs.push_back({"s" + pad(v, 2), trip, 100, 160});
            for (std::uint32_t j = 0; j < 48; ++j)
                legs.push_back({"f" + pad(trip_no, 3) + "_" + pad(j, 2), trip, 100, 160});
            ++trip_no;
        }
    }
    REQUIRE(trip_no == 405, "expected 405 trips");
    std::sort(legs.begin(), legs.end(), detail::leg_order);

    const ContactGraph g = build_contact_graph(legs);
    const EnumerationResult r = enumerate_all(g, true);

    // Per trip everyone rides together: one group per trip. The collapsed
    // graph keeps those 405 cliques and adds one clique per transversal of
    // the ten triples: 3^10 = 59049.
    REQUIRE(r.groups.size() == 405, "each trip must collapse to one group");
    REQUIRE(r.raw_cliques.size() == 405 + 59049, "collapsed clique count off");
    REQUIRE(r.timing.raw_seconds.has_value(), "raw timing missing");
    REQUIRE(r.timing.partitioned_seconds < *r.timing.raw_seconds,
            "partitioned enumeration was not faster");
    std::printf("[info] partitioned=%.4fs raw=%.4fs ratio=%.1fx\n",
                r.timing.partitioned_seconds, *r.timing.raw_seconds,
                *r.timing.raw_seconds / std::max(r.timing.partitioned_seconds, 1e-9));
}

// 5. Transfer edges point from the earlier ride to the later one, including
// the single-shared-passenger rule and both tie-break levels.
void criterion_transfer_direction() {
    const auto transfer_of = [](std::vector<TrajectoryLeg> legs,
                                const std::vector<TripMeta>& meta) {
        std::sort(legs.begin(), legs.end(), detail::leg_order);
        const ContactGraph g = build_contact_graph(legs);
        return build_transfer_graph(enumerate_all(g).groups, g, meta);
    };
    const auto only_edge = [](const TransferGraph& f) {
        REQUIRE(f.edges.size() == 1, "expected exactly one transfer edge");
        return f.edges.front();
    };

    {  // party of two riding t1 then t2
        const TransferGraph f = transfer_of({{"p", "t1", 420, 480},
                                             {"q", "t1", 420, 480},
                                             {"p", "t2", 500, 560},
                                             {"q", "t2", 500, 560}},
                                            {{"t1", "r1", 400}, {"t2", "r1", 480}});
        const TransferEdge e = only_edge(f);
        REQUIRE(f.trips[e.from_trip] == "t1" && f.trips[e.to_trip] == "t2",
                "two-shared edge must follow ride order");
        REQUIRE(e.weight == 2, "two shared passengers -> weight 2");
    }
    {  // one shared passenger, direction from the anchor's earlier contacts
        const TransferGraph f = transfer_of({{"a1", "t1", 400, 430},
                                             {"x", "t1", 400, 430},
                                             {"a1", "t2", 500, 530},
                                             {"y", "t2", 500, 530}},
                                            {{"t1", "r1", 390}, {"t2", "r1", 490}});
        const TransferEdge e = only_edge(f);
        REQUIRE(f.trips[e.from_trip] == "t1" && f.trips[e.to_trip] == "t2",
                "single-shared edge must follow the anchor's contacts");
        REQUIRE(e.weight == 1, "one shared passenger -> weight 1");
    }
    {  // equal earliest contacts: earlier scheduled trip wins, both ways
        const std::vector<TrajectoryLeg> legs = {{"p", "t1", 100, 160},
                                                 {"q", "t1", 100, 160},
                                                 {"p", "t2", 100, 160},
                                                 {"q", "t2", 100, 160}};
        const TransferEdge a =
            only_edge(transfer_of(legs, {{"t1", "r1", 90}, {"t2", "r1", 95}}));
        const TransferEdge b =
            only_edge(transfer_of(legs, {{"t1", "r1", 95}, {"t2", "r1", 90}}));
        const TransferGraph fa = transfer_of(legs, {{"t1", "r1", 90}, {"t2", "r1", 95}});
        REQUIRE(fa.trips[a.from_trip] == "t1", "start-time tie-break (forward)");
        REQUIRE(fa.trips[b.from_trip] == "t2", "start-time tie-break (reversed)");
    }
    {  // full tie: lexicographically smaller trip id first
        const TransferGraph f = transfer_of({{"p", "t9", 100, 160},
                                             {"q", "t9", 100, 160},
                                             {"p", "t2", 100, 160},
                                             {"q", "t2", 100, 160}},
                                            {{"t2", "r1", 100}, {"t9", "r1", 100}});
        const TransferEdge e = only_edge(f);
        REQUIRE(f.trips[e.from_trip] == "t2" && f.trips[e.to_trip] == "t9",
                "id tie-break must pick the smaller trip id");
    }

    // Synthetic chains: whenever every shared passenger finishes one trip
    // before any of them boards the other, the edge must point that way.
    SyntheticConfig cfg;
    cfg.passenger_count = 400;
    cfg.trip_count = 30;
    cfg.transfer_probability = 0.9;
    cfg.rng_seed = 11;
    const Dataset data = generate_synthetic(cfg);
    const ContactGraph g = build_contact_graph(data.legs);
    const TransferGraph f = build_transfer_graph(enumerate_all(g).groups, g, data.trips);

    std::map<std::pair<std::string, std::string>, std::pair<Minutes, Minutes>> leg_of;
    for (const TrajectoryLeg& leg : data.legs)
        leg_of[{leg.passenger_id, leg.trip_id}] = {leg.board_time, leg.alight_time};

    int tested = 0;
    for (const TransferEdge& e : f.edges) {
        const std::string& from = f.trips[e.from_trip];
        const std::string& to = f.trips[e.to_trip];
        Minutes from_max_alight = 0, to_max_alight = 0;
        Minutes from_min_board = 100000, to_min_board = 100000;
        for (const PassengerIdx p : e.shared) {
            const auto& on_from = leg_of.at({f.passengers[p], from});
            const auto& on_to = leg_of.at({f.passengers[p], to});
            from_max_alight = std::max(from_max_alight, on_from.second);
            from_min_board = std::min(from_min_board, on_from.first);
            to_max_alight = std::max(to_max_alight, on_to.second);
            to_min_board = std::min(to_min_board, on_to.first);
        }
        const bool from_first = from_max_alight <= to_min_board;
        const bool to_first = to_max_alight <= from_min_board;
        REQUIRE(!to_first || from_first, "edge points against the ride order");
        if (from_first && !to_first) ++tested;
    }
    REQUIRE(tested >= 20, "too few time-ordered transfer edges to test");
    std::printf("[info] transfer edges with a strict ride order: %d of %zu\n", tested,
                f.edges.size());
}

// 6. Trip-pair scores: library result == score recomputed from raw clique
// member lists, for every pair of trips on random ≤10-trip instances.
void criterion_pair_oracle() {
    std::mt19937_64 rng(55);
    for (int round = 0; round < 8; ++round) {
        const std::uint32_t trip_count = 2 + below(rng, 9);
        std::vector<TrajectoryLeg> legs;
        std::vector<TripMeta> meta;
        for (std::uint32_t t = 0; t < trip_count; ++t) {
            const std::string trip = "t" + pad(t, 2);
            meta.push_back({trip, "r1", static_cast<Minutes>(100 + 5 * t)});
            std::vector<std::uint32_t> pool(40);
            for (std::uint32_t i = 0; i < 40; ++i) pool[i] = i;
            for (std::uint32_t i = 0; i < 40; ++i)
                std::swap(pool[i], pool[i + below(rng, 40 - i)]);
            const std::uint32_t size = 3 + below(rng, 8);
            for (std::uint32_t k = 0; k < size; ++k) {
                const Minutes board = static_cast<Minutes>(below(rng, 40));
                const Minutes dur = 1 + static_cast<Minutes>(below(rng, 30));
                legs.push_back({"q" + pad(pool[k], 2), trip, board, board + dur});
            }
        }
        std::sort(legs.begin(), legs.end(), detail::leg_order);

        const ContactGraph g = build_contact_graph(legs);
        const std::vector<AtomicGroup> groups = enumerate_all(g).groups;
        const std::vector<TripPairScore> scores =
            score_trip_pairs(build_transfer_graph(groups, g, meta));

        std::vector<std::vector<std::vector<std::string>>> by_trip(g.trips.size());
        for (const AtomicGroup& grp : groups) {
            std::vector<std::string> names;
            for (const PassengerIdx p : grp.members) names.push_back(g.passengers[p]);
            by_trip[grp.trip].push_back(std::move(names));
        }
        std::map<std::pair<std::string, std::string>, std::uint64_t> scored;
        for (const TripPairScore& s : scores) scored[{s.trip_i, s.trip_j}] = s.m;

        for (std::uint32_t i = 0; i < g.trips.size(); ++i) {
            for (std::uint32_t j = i + 1; j < g.trips.size(); ++j) {
                const std::uint64_t expected = oracles::m_from_cliques(by_trip[i], by_trip[j]);
                REQUIRE(expected == oracles::m_from_counts(by_trip[i], by_trip[j]),
                        "the two reference scores disagree");
                const auto it = scored.find({g.trips[i], g.trips[j]});
                const std::uint64_t got = it == scored.end() ? 0 : it->second;
                REQUIRE(got == expected, "trip-pair score mismatch");
            }
        }
    }
}

// 7. Single-edge closed form: seed one endpoint of a w=0.5 edge, five rounds,
// 10000 replicates; the neighbor's likelihood must land within ±0.01 of
// 1 - 0.5^5 = 0.96875.
void criterion_si_closed_form() {
    const std::vector<TrajectoryLeg> legs = {{"a", "t1", 0, 30}, {"b", "t1", 0, 30}};
    const ContactGraph g = build_contact_graph(legs);
    TransmissionWeights w;
    w.keys = simple_pairs(g);
    w.prob = {0.5};
    REQUIRE(w.keys.size() == 1, "expected one contact pair");

    SiConfig cfg;
    cfg.iterations = 5;
    cfg.replicates = 10000;
    cfg.rng_seed = 42;
    cfg.fixed_seeds = {0};
    const RiskReport report = run_si(g, w, cfg);
    REQUIRE(report.likelihood[0] == 1.0, "seed likelihood must be exactly 1");
    const double expected = 1.0 - std::pow(0.5, 5);
    REQUIRE(std::abs(report.likelihood[1] - expected) <= 0.01,
            "neighbor likelihood " + std::to_string(report.likelihood[1]) +
                " not within 0.01 of " + std::to_string(expected));
}

// 8. Spread runs are reproducible bit for bit, never shrink as rounds are
// added, and with certain transmission match plain 5-hop reachability.
void criterion_si_determinism() {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i + 1 < 40; ++i) pairs.emplace_back(i, i + 1);
    std::mt19937_64 rng(77);
    while (pairs.size() < 70) {
        const std::uint32_t u = below(rng, 40);
        const std::uint32_t v = below(rng, 40);
        if (u == v) continue;
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    std::vector<TrajectoryLeg> legs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string trip = "e" + pad(static_cast<std::uint32_t>(i), 3);
        legs.push_back({"n" + pad(pairs[i].first, 2), trip, 0, 30});
        legs.push_back({"n" + pad(pairs[i].second, 2), trip, 0, 30});
    }
    std::sort(legs.begin(), legs.end(), detail::leg_order);
    const ContactGraph g = build_contact_graph(legs);

    TransmissionWeights w;
    w.keys = simple_pairs(g);
    w.prob.assign(w.keys.size(), 0.3);

    SiConfig cfg;
    cfg.iterations = 5;
    cfg.replicates = 500;
    cfg.seed_count = 6;
    cfg.rng_seed = 7;

    const RiskReport first = run_si(g, w, cfg);
    const RiskReport second = run_si(g, w, cfg);
    REQUIRE(first.infected_counts == second.infected_counts, "same seed, different counts");
    REQUIRE(first.likelihood == second.likelihood, "same seed, different likelihoods");

    setenv("TRANSITMESH_THREADS", "1", 1);
    const RiskReport serial = run_si(g, w, cfg);
    setenv("TRANSITMESH_THREADS", "4", 1);
    const RiskReport threaded = run_si(g, w, cfg);
    unsetenv("TRANSITMESH_THREADS");
    REQUIRE(serial.infected_counts == threaded.infected_counts,
            "results depend on the worker count");

    // Adding rounds replays the same draws first, so per-passenger counts
    // can only grow.
    SiConfig grow = cfg;
    grow.fixed_seeds = {0, 3};
    std::vector<std::uint64_t> prev;
    for (std::uint32_t it = 1; it <= 5; ++it) {
        grow.iterations = it;
        const RiskReport r = run_si(g, w, grow);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < prev.size(); ++i)
                REQUIRE(prev[i] <= r.infected_counts[i], "infected count shrank");
        }
        prev = r.infected_counts;
    }

    // Certain transmission percolates to exactly the 5-hop neighborhood.
    TransmissionWeights certain;
    certain.keys = w.keys;
    certain.prob.assign(w.keys.size(), 1.0);
    SiConfig perc = cfg;
    perc.iterations = 5;
    perc.replicates = 3;
    perc.fixed_seeds = {0};
    const RiskReport r = run_si(g, certain, perc);
    const auto reach = oracles::k_hop_reachable(40, pairs, {0}, 5);
    for (std::uint32_t u = 0; u < 40; ++u) {
        const double expected = reach.count(u) ? 1.0 : 0.0;
        REQUIRE(r.likelihood[u] == expected, "percolation != 5-hop reachability");
    }
}

// 9. Thresholding is monotone: passenger, edge and trip counts never grow as
// tau rises through 0, 5, 15, 30.
void criterion_pruning_monotone() {
    SyntheticConfig cfg;
    cfg.passenger_count = 800;
    cfg.trip_count = 40;
    cfg.transfer_probability = 0.5;
    cfg.rng_seed = 9;
    const Dataset data = generate_synthetic(cfg);
    const ContactGraph built = build_contact_graph(data.legs);

    std::size_t prev_nodes = built.passengers.size();
    std::size_t prev_edges = built.edges.size();
    std::size_t prev_trips = built.trips.size();
    REQUIRE(prev_edges > 0, "synthetic instance produced no contacts");
    for (const Minutes tau : {5, 15, 30}) {
        const ContactGraph p = prune(built, tau);
        for (const ContactEdge& e : p.edges)
            REQUIRE(e.duration >= tau, "kept an edge below the threshold");
        REQUIRE(p.passengers.size() <= prev_nodes, "passenger count grew");
        REQUIRE(p.edges.size() <= prev_edges, "edge count grew");
        REQUIRE(p.trips.size() <= prev_trips, "trip count grew");
        prev_nodes = p.passengers.size();
        prev_edges = p.edges.size();
        prev_trips = p.trips.size();
    }
}

// 10. generate -> pipeline with stock settings at 1000 passengers / 100
// trips: all artifacts appear and every manifest count survives an
// independent getline recount.
void criterion_end_to_end() {
    const fs::path dir =
        fs::temp_directory_path() / ("transitmesh_acceptance_" + std::to_string(getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string data = (dir / "data").string();
    const std::string out = (dir / "out").string();

    const CliResult gen =
        run_cli("generate --passengers 1000 --trips 100 --seed 5 --out " + data);
    REQUIRE(gen.exit_code == 0, "generate failed:\n" + gen.output);
    const CliResult pipe = run_cli("pipeline --input " + data + "/trajectories.csv --trips " +
                                   data + "/trips.csv --out " + out);
    REQUIRE(pipe.exit_code == 0, "pipeline failed:\n" + pipe.output);

    for (const char* name :
         {"contact_tau0.csv", "contact_tau5.csv", "contact_tau15.csv", "contact_tau30.csv",
          "groups.csv", "transfer_edges.csv", "pair_scores.csv", "community_edges.csv",
          "communities.json", "risk_report.json", "manifest.json"})
        REQUIRE(fs::exists(fs::path(out) / name), std::string("missing artifact ") + name);

    const Json manifest = Json::parse(slurp(out + "/manifest.json"));

    // Input section against the raw trajectory file.
    const auto leg_rows = csv_rows(data + "/trajectories.csv");
    std::set<std::string> leg_passengers;
    std::map<std::string, std::set<std::string>> trips_of;
    std::set<std::string> leg_trips;
    for (const auto& row : leg_rows) {
        leg_passengers.insert(row[0]);
        trips_of[row[0]].insert(row[1]);
        leg_trips.insert(row[1]);
    }
    REQUIRE(manifest["input"]["leg_count"] == leg_rows.size(), "leg count mismatch");
    REQUIRE(manifest["input"]["passenger_count"] == leg_passengers.size(),
            "passenger count mismatch");
    REQUIRE(manifest["input"]["trip_count"] == csv_rows(data + "/trips.csv").size(),
            "trip count mismatch");
    REQUIRE(manifest["base_tau"] == 0, "stock base tau must be 0");

    // Per-threshold graph rows against the contact CSVs.
    REQUIRE(manifest["graphs"].size() == 4, "expected four thresholded graphs");
    const int taus[4] = {0, 5, 15, 30};
    for (int i = 0; i < 4; ++i) {
        const Json& row = manifest["graphs"][i];
        REQUIRE(row["tau"] == taus[i], "tau order mismatch");
        const auto contact =
            csv_rows(out + "/contact_tau" + std::to_string(taus[i]) + ".csv");
        REQUIRE(row["edges"] == contact.size(), "edge recount mismatch");

        std::set<std::string> included;
        if (taus[i] == 0) {
            included = leg_passengers;
        } else {
            for (const auto& c : contact) {
                included.insert(c[0]);
                included.insert(c[1]);
            }
        }
        std::set<std::string> trips;
        for (const std::string& p : included)
            trips.insert(trips_of[p].begin(), trips_of[p].end());
        REQUIRE(row["passengers"] == included.size(), "passenger recount mismatch");
        REQUIRE(row["trips"] == trips.size(), "trip recount mismatch");
    }

    // Count section against the stage artifacts.
    const Json& counts = manifest["counts"];
    REQUIRE(counts["groups"] == csv_rows(out + "/groups.csv").size(), "groups recount");
    REQUIRE(counts["groups"] == manifest["graphs"][0]["groups"], "base group count");
    REQUIRE(counts["transfer_edges"] == csv_rows(out + "/transfer_edges.csv").size(),
            "transfer recount");
    const auto pair_rows = csv_rows(out + "/pair_scores.csv");
    REQUIRE(counts["trip_pairs"] == pair_rows.size(), "pair recount");
    const auto community_rows = csv_rows(out + "/community_edges.csv");
    std::set<std::string> community_nodes;
    for (const auto& row : community_rows) {
        community_nodes.insert(row[0]);
        community_nodes.insert(row[1]);
    }
    REQUIRE(counts["community_edges"] == community_rows.size(), "community edge recount");
    REQUIRE(counts["community_nodes"] == community_nodes.size(), "community node recount");
    REQUIRE(counts["communities"] == Json::parse(slurp(out + "/communities.json")).size(),
            "community recount");
    REQUIRE(counts["risk_trips"] ==
                Json::parse(slurp(out + "/risk_report.json"))["per_trip"].size(),
            "risk recount");

    // Leading pairs must be the head of the full score list.
    const Json& tops = manifest["top_pairs"];
    REQUIRE(tops.size() == std::min<std::size_t>(5, pair_rows.size()), "top pair count");
    for (std::size_t i = 0; i < tops.size(); ++i) {
        REQUIRE(tops[i]["trip_i"] == pair_rows[i][0], "top pair trip_i");
        REQUIRE(tops[i]["trip_j"] == pair_rows[i][1], "top pair trip_j");
        REQUIRE(tops[i]["m"] == std::stoull(pair_rows[i][2]), "top pair score");
    }

    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion("1. connection-strength worked values", 0.001, criterion_strength_values);
    criterion("2. strength closed form == cross-trip products", 1.0,
              criterion_strength_identity);
    criterion("3. clique enumeration == subset scan == interval sweep", 30.0,
              criterion_clique_oracle);
    criterion("4. partitioned enumeration beats whole-graph", 120.0,
              criterion_partitioned_speedup);
    criterion("5. transfer edges follow the ride order", 1.0, criterion_transfer_direction);
    criterion("6. trip-pair scores match clique recount", 5.0, criterion_pair_oracle);
    criterion("7. single-edge spread matches closed form", 10.0, criterion_si_closed_form);
    criterion("8. spread determinism and reachability", 30.0, criterion_si_determinism);
    criterion("9. threshold pruning is monotone", 5.0, criterion_pruning_monotone);
    criterion("10. end-to-end pipeline counts recount", 60.0, criterion_end_to_end);
    std::puts("acceptance: 10/10 criteria passed");
    return 0;
}
