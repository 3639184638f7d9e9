#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transitmesh/transitmesh.hpp"

namespace tmesh = transitmesh;
namespace fs = std::filesystem;

namespace {

struct StageInputs {
    std::string legs_path;
    std::string trips_path;
    std::string contact_path;
    int tau = 0;
};

void add_stage_inputs(CLI::App* cmd, StageInputs& in, bool with_contact) {
    cmd->add_option("--input", in.legs_path, "trajectory legs CSV")->required();
    cmd->add_option("--trips", in.trips_path, "trip table CSV")->required();
    if (with_contact)
        cmd->add_option("--contact", in.contact_path, "contact edges CSV from the contact stage")
            ->required();
    cmd->add_option("--tau", in.tau, "contact duration threshold the contact CSV was built with")
        ->check(CLI::NonNegativeNumber);
}

struct LoadedStage {
    tmesh::Dataset data;
    tmesh::ContactGraph graph;
};

LoadedStage load_stage(const StageInputs& in) {
    LoadedStage s;
    s.data = tmesh::load_trajectories(in.legs_path, in.trips_path);
    s.graph = tmesh::load_contact_graph(in.contact_path, s.data.legs,
                                     static_cast<tmesh::Minutes>(in.tau));
    return s;
}

void print_wrote(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transitmesh: transit trajectory contact/transfer/community analytics"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a synthetic trajectory dataset");
    tmesh::SyntheticConfig gen_cfg;
    std::string gen_out = ".";
    gen->add_option("--passengers", gen_cfg.passenger_count, "number of passengers")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--trips", gen_cfg.trip_count, "number of vehicle trips")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--transfer-prob", gen_cfg.transfer_probability,
                    "probability a party transfers after a leg")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--group-weights", gen_cfg.group_size_weights,
                    "relative weights for party sizes 1,2,...");
    gen->add_option("--max-legs", gen_cfg.max_legs_per_passenger,
                    "maximum legs per passenger")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_cfg.rng_seed, "generator seed");
    gen->add_option("--out", gen_out, "output directory");
    gen->callback([&] {
        const tmesh::Dataset data = tmesh::generate_synthetic(gen_cfg);
        const fs::path legs = fs::path(gen_out) / "trajectories.csv";
        const fs::path trips = fs::path(gen_out) / "trips.csv";
        tmesh::write_trajectories(data, legs.string(), trips.string());
        print_wrote(legs);
        print_wrote(trips);
    });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run every stage and write all artifacts");
    tmesh::PipelineConfig pcfg;
    std::vector<int> pipe_taus = {0, 5, 15, 30};
    pipe->add_option("--input", pcfg.legs_path, "trajectory legs CSV")->required();
    pipe->add_option("--trips", pcfg.trips_path, "trip table CSV")->required();
    pipe->add_option("--out", pcfg.out_dir, "output directory")->required();
    pipe->add_option("--tau", pipe_taus,
                     "contact duration thresholds in minutes (first one feeds later stages)");
    pipe->add_option("--top-k", pcfg.top_k, "frequent trip pairs to list in the manifest")
        ->check(CLI::PositiveNumber);
    pipe->add_option("--min-strength", pcfg.min_strength, "community edge strength filter");
    pipe->add_option("--min-degree", pcfg.min_degree, "community degree filter (k-core)");
    pipe->add_option("--iterations", pcfg.si.iterations, "SI rounds per replicate")
        ->check(CLI::PositiveNumber);
    pipe->add_option("--replicates", pcfg.si.replicates, "SI Monte-Carlo replicates")
        ->check(CLI::PositiveNumber);
    pipe->add_option("--seeds", pcfg.si.seed_count, "initially infected passengers per replicate")
        ->check(CLI::PositiveNumber);
    pipe->add_option("--rng-seed", pcfg.si.rng_seed, "SI simulation seed");
    pipe->add_flag("--raw-clique-benchmark", pcfg.raw_clique_benchmark,
                   "also time unpartitioned whole-graph clique enumeration");
    pipe->add_flag("--per-passenger", pcfg.per_passenger,
                   "include per-passenger likelihoods in the risk report");
    pipe->add_flag("--zero-min", pcfg.transmission.zero_min,
                   "scale strengths from 0 instead of the observed minimum");
    pipe->callback([&] {
        pcfg.taus.assign(pipe_taus.begin(), pipe_taus.end());
        const tmesh::PipelineResult r = tmesh::run_pipeline(pcfg);
        for (const auto& row : r.manifest["graphs"]) {
            std::cout << row["graph"].get<std::string>()
                      << ": passengers=" << row["passengers"].get<std::size_t>()
                      << " edges=" << row["edges"].get<std::size_t>()
                      << " trips=" << row["trips"].get<std::size_t>();
            if (!row["time_raw_s"].is_null())
                std::cout << " raw=" << row["time_raw_s"].get<double>() << "s";
            std::cout << " partitioned=" << row["time_partitioned_s"].get<double>() << "s\n";
        }
        std::cout << "groups=" << r.groups.size()
                  << " transfer_edges=" << r.transfer.edges.size()
                  << " trip_pairs=" << r.scores.size()
                  << " community_edges=" << r.community.edges.size()
                  << " communities=" << r.communities.size() << "\n";
        if (!r.top_pairs.empty())
            std::cout << "top pair: " << r.top_pairs.front().trip_i << "/"
                      << r.top_pairs.front().trip_j << " m=" << r.top_pairs.front().m << "\n";
        if (!r.ranked.empty())
            std::cout << "top risk: " << r.ranked.front().trip_id
                      << " score=" << r.ranked.front().score << "\n";
        print_wrote(fs::path(pcfg.out_dir) / "manifest.json");
    });

    // contact
    auto* contact = app.add_subcommand("contact", "build contact graphs and write edge CSVs");
    std::string c_legs, c_trips, c_out;
    std::vector<int> c_taus = {0};
    contact->add_option("--input", c_legs, "trajectory legs CSV")->required();
    contact->add_option("--trips", c_trips, "trip table CSV")->required();
    contact->add_option("--out", c_out, "output directory")->required();
    contact->add_option("--tau", c_taus, "contact duration thresholds in minutes");
    contact->callback([&] {
        const tmesh::Dataset data = tmesh::load_trajectories(c_legs, c_trips);
        const tmesh::ContactGraph built = tmesh::build_contact_graph(data.legs);
        int prev = -1;
        for (const int tau : c_taus) {
            if (tau < 0) throw tmesh::ValidationError("tau values must be >= 0");
            if (tau <= prev) throw tmesh::ValidationError("tau values must be strictly increasing");
            prev = tau;
            const tmesh::ContactGraph g =
                tau == 0 ? built : tmesh::prune(built, static_cast<tmesh::Minutes>(tau));
            const fs::path out =
                fs::path(c_out) / tmesh::contact_artifact_name(static_cast<tmesh::Minutes>(tau));
            tmesh::write_contact_csv(out.string(), g);
            std::cout << tmesh::graph_label(static_cast<tmesh::Minutes>(tau))
                      << ": passengers=" << g.passengers.size() << " edges=" << g.edges.size()
                      << " trips=" << g.trips.size() << "\n";
            print_wrote(out);
        }
    });

    // cliques
    auto* cliq = app.add_subcommand("cliques", "enumerate atomic groups from a contact CSV");
    StageInputs cliq_in;
    std::string cliq_out;
    bool cliq_raw = false;
    add_stage_inputs(cliq, cliq_in, true);
    cliq->add_option("--out", cliq_out, "output directory")->required();
    cliq->add_flag("--raw-clique-benchmark", cliq_raw,
                   "also time unpartitioned whole-graph enumeration");
    cliq->callback([&] {
        const LoadedStage s = load_stage(cliq_in);
        const tmesh::EnumerationResult r = tmesh::enumerate_all(s.graph, cliq_raw);
        const fs::path out = fs::path(cliq_out) / "groups.csv";
        tmesh::write_groups_csv(out.string(), r.groups, s.graph);
        std::cout << "groups=" << r.groups.size()
                  << " partitioned=" << r.timing.partitioned_seconds << "s";
        if (r.timing.raw_seconds)
            std::cout << " raw=" << *r.timing.raw_seconds << "s (raw cliques "
                      << r.raw_cliques.size() << ")";
        std::cout << "\n";
        print_wrote(out);
    });

    // transfer
    auto* trans = app.add_subcommand("transfer", "build the transfer network and pair scores");
    StageInputs trans_in;
    std::string trans_groups, trans_out;
    std::size_t trans_topk = 5;
    add_stage_inputs(trans, trans_in, true);
    trans->add_option("--groups", trans_groups, "groups CSV from the cliques stage")->required();
    trans->add_option("--out", trans_out, "output directory")->required();
    trans->add_option("--top-k", trans_topk, "pairs to print")->check(CLI::PositiveNumber);
    trans->callback([&] {
        const LoadedStage s = load_stage(trans_in);
        const std::vector<tmesh::AtomicGroup> groups = tmesh::load_groups(trans_groups, s.graph);
        const tmesh::TransferGraph f = tmesh::build_transfer_graph(groups, s.graph, s.data.trips);
        const std::vector<tmesh::TripPairScore> scores = tmesh::score_trip_pairs(f);
        const fs::path edges_out = fs::path(trans_out) / "transfer_edges.csv";
        const fs::path pairs_out = fs::path(trans_out) / "pair_scores.csv";
        tmesh::write_transfer_csv(edges_out.string(), f);
        tmesh::write_pairs_csv(pairs_out.string(), scores);
        for (const tmesh::TripPairScore& p : tmesh::top_k_pairs(scores, trans_topk))
            std::cout << p.trip_i << "/" << p.trip_j << " m=" << p.m << "\n";
        print_wrote(edges_out);
        print_wrote(pairs_out);
    });

    // community
    auto* comm = app.add_subcommand("community", "build the community network and communities");
    StageInputs comm_in;
    std::string comm_groups, comm_out;
    std::uint64_t comm_min_strength = 5;
    std::uint32_t comm_min_degree = 2;
    add_stage_inputs(comm, comm_in, true);
    comm->add_option("--groups", comm_groups, "groups CSV from the cliques stage")->required();
    comm->add_option("--out", comm_out, "output directory")->required();
    comm->add_option("--min-strength", comm_min_strength, "edge strength filter");
    comm->add_option("--min-degree", comm_min_degree, "degree filter (k-core)");
    comm->callback([&] {
        const LoadedStage s = load_stage(comm_in);
        const std::vector<tmesh::AtomicGroup> groups = tmesh::load_groups(comm_groups, s.graph);
        const tmesh::CommunityGraph h = tmesh::build_community_graph(groups);
        const auto communities = tmesh::extract_communities(h, comm_min_strength, comm_min_degree);
        const fs::path edges_out = fs::path(comm_out) / "community_edges.csv";
        const fs::path comm_json = fs::path(comm_out) / "communities.json";
        tmesh::write_community_csv(edges_out.string(), h, s.graph.passengers);
        tmesh::write_communities_json(comm_json.string(), communities, s.graph.passengers);
        std::cout << "community_nodes=" << h.nodes.size() << " community_edges=" << h.edges.size()
                  << " communities=" << communities.size() << "\n";
        print_wrote(edges_out);
        print_wrote(comm_json);
    });

    // epidemic
    auto* epi = app.add_subcommand("epidemic", "run the SI simulation and rank trips by risk");
    StageInputs epi_in;
    std::string epi_community, epi_out;
    tmesh::SiConfig epi_si;
    tmesh::TransmissionParams epi_params;
    bool epi_per_passenger = false;
    add_stage_inputs(epi, epi_in, true);
    epi->add_option("--community", epi_community, "community edges CSV")->required();
    epi->add_option("--out", epi_out, "output directory")->required();
    epi->add_option("--iterations", epi_si.iterations, "SI rounds per replicate")
        ->check(CLI::PositiveNumber);
    epi->add_option("--replicates", epi_si.replicates, "Monte-Carlo replicates")
        ->check(CLI::PositiveNumber);
    epi->add_option("--seeds", epi_si.seed_count, "initially infected passengers per replicate")
        ->check(CLI::PositiveNumber);
    epi->add_option("--rng-seed", epi_si.rng_seed, "simulation seed");
    epi->add_flag("--per-passenger", epi_per_passenger,
                  "include per-passenger likelihoods in the report");
    epi->add_flag("--zero-min", epi_params.zero_min,
                  "scale strengths from 0 instead of the observed minimum");
    epi->callback([&] {
        const LoadedStage s = load_stage(epi_in);
        const tmesh::CommunityGraph h = tmesh::load_community_graph(epi_community, s.graph);
        const tmesh::TransmissionWeights w = tmesh::assign_weights(s.graph, h, epi_params);
        const tmesh::RiskReport report = tmesh::run_si(s.graph, w, epi_si);
        const auto ranked = tmesh::rank_trips(report, s.data.legs, s.graph.passengers);

        tmesh::Json config;
        config["tau"] = epi_in.tau;
        config["iterations"] = epi_si.iterations;
        config["replicates"] = epi_si.replicates;
        config["seed_count"] = epi_si.seed_count;
        config["rng_seed"] = epi_si.rng_seed;
        config["cap"] = epi_params.cap;
        config["lo"] = epi_params.lo;
        config["hi"] = epi_params.hi;
        config["base_prob"] = epi_params.base_prob;
        std::vector<std::pair<std::string, double>> per_passenger;
        if (epi_per_passenger) {
            for (std::size_t i = 0; i < s.graph.passengers.size(); ++i)
                per_passenger.emplace_back(s.graph.passengers[i], report.likelihood[i]);
        }
        const tmesh::Json risk = tmesh::risk_json(config, ranked, s.data.trips,
                                            epi_per_passenger ? &per_passenger : nullptr);
        const fs::path out = fs::path(epi_out) / "risk_report.json";
        tmesh::write_json(out.string(), risk);
        if (!ranked.empty())
            std::cout << "top risk: " << ranked.front().trip_id
                      << " score=" << ranked.front().score << "\n";
        print_wrote(out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tmesh::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tmesh::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
