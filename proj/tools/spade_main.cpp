// SPDX-License-Identifier: Apache-2.0
//
// spade: spectral robustness scoring for graphs, with training-set
// selection, defensive pruning, spectral edge attacks, and robust-node
// hypergraph partitioning.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "spade/apps.hpp"
#include "spade/eig.hpp"
#include "spade/errors.hpp"
#include "spade/gcn.hpp"
#include "spade/graph.hpp"
#include "spade/hyperpart.hpp"
#include "spade/io.hpp"
#include "spade/knn.hpp"
#include "spade/laplacian.hpp"
#include "spade/point_set.hpp"
#include "spade/scores.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    // graph sources
    std::string graph_x_path, graph_y_path;
    std::string features_x_path, features_y_path;
    std::string dataset_dir;
    std::string wiring = "features";  // "features" or "graph" for dataset mode

    // kNN
    int k = 20;
    std::string knn_mode = "auto";  // exact | approx | auto
    double quality = spade::kDefaultKnnQuality;

    // solver
    int s = 10;
    double tol = 1e-6;
    std::string solver = "auto";  // auto | dense | iterative

    // training (dataset mode)
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    int epochs = 5;
    int hidden_dim = 64;
    double train_fraction = 0.8;

    // command parameters
    double fraction = 0.8;
    double ratio = 0.1;
    int budget = 1;
    int k_prime = 10;
    int n_blocks = 2;
    double robust_fraction = 0.5;
    int embed_k = 2;  // K eigenvectors for hypergraph embedding
    std::string selection = "largest-magnitude";
    std::string hgr_path, partition_path;

    uint64_t seed = 0;
    std::optional<uint64_t> split_seed;
    std::string out_dir;

    uint64_t effective_split_seed() const { return split_seed.value_or(seed); }
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--out", cfg.out_dir, "output directory")->required();
    cmd->add_option("--seed", cfg.seed, "seed for every stochastic stage");
}

void add_knn_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--k", cfg.k, "kNN neighbor count");
    cmd->add_option("--knn-mode", cfg.knn_mode, "exact | approx | auto")
        ->check(CLI::IsMember({"exact", "approx", "auto"}));
    cmd->add_option("--quality", cfg.quality, "approximate kNN quality in (0,1]");
}

void add_solver_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--s", cfg.s, "number of generalized eigenvectors");
    cmd->add_option("--tol", cfg.tol, "iterative eigensolver tolerance");
    cmd->add_option("--solver", cfg.solver, "auto | dense | iterative eigensolver path")
        ->check(CLI::IsMember({"auto", "dense", "iterative"}));
}

void add_score_input_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--graph-x", cfg.graph_x_path, "G_X as edge-list TSV");
    cmd->add_option("--features-x", cfg.features_x_path, "G_X = kNN over CSV features");
    cmd->add_option("--graph-y", cfg.graph_y_path, "G_Y as edge-list TSV");
    cmd->add_option("--features-y", cfg.features_y_path, "G_Y = kNN over CSV features");
    cmd->add_option("--dataset", cfg.dataset_dir,
                    "citation dataset dir (.content/.cites); trains the GCN and derives "
                    "both manifolds");
    cmd->add_option("--wiring", cfg.wiring,
                    "dataset mode: G_X from raw-feature kNN (features) or the input "
                    "graph itself (graph)")
        ->check(CLI::IsMember({"features", "graph"}));
}

void add_train_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--lr", cfg.learning_rate, "learning rate");
    cmd->add_option("--weight-decay", cfg.weight_decay, "L2 weight decay");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--hidden", cfg.hidden_dim, "hidden layer width");
    cmd->add_option("--train-fraction", cfg.train_fraction, "train split fraction");
    cmd->add_option("--split-seed", cfg.split_seed,
                    "train/test split seed (defaults to --seed)");
}

spade::Graph knn_graph(const spade::PointSet& pts, const RunConfig& cfg) {
    const bool exact = cfg.knn_mode == "exact" ||
                       (cfg.knn_mode == "auto" && pts.n_points() <= 10000);
    return exact ? spade::knn_exact(pts, cfg.k)
                 : spade::knn_approx(pts, cfg.k, cfg.quality);
}

// Everything the scoring commands need, plus the trained model when the
// dataset mode produced one.
struct ScoringInputs {
    spade::Graph g_x, g_y;
    std::optional<spade::LabeledDataset> dataset;
    std::optional<spade::TrainResult> trained;
    json inputs_manifest = json::object();
};

ScoringInputs resolve_scoring_inputs(const RunConfig& cfg) {
    ScoringInputs in;
    const bool dataset_mode = !cfg.dataset_dir.empty();
    const bool direct_x = !cfg.graph_x_path.empty() || !cfg.features_x_path.empty();
    const bool direct_y = !cfg.graph_y_path.empty() || !cfg.features_y_path.empty();
    if (dataset_mode == (direct_x || direct_y)) {
        throw spade::ParameterError(
            "provide either --dataset or explicit --graph-x/--features-x and "
            "--graph-y/--features-y sources");
    }

    if (dataset_mode) {
        spade::LabeledDataset data = spade::load_citation_dir(
            cfg.dataset_dir, cfg.train_fraction, cfg.effective_split_seed());
        spade::TrainConfig tc{cfg.learning_rate, cfg.weight_decay, cfg.epochs, cfg.seed,
                              cfg.hidden_dim};
        spade::TrainResult trained = spade::gcn_train(data, tc);
        spade::DenseMatrix embedding = spade::gcn_embed(trained.model, data);
        spade::PointSet emb_pts{spade::RowMatrix(embedding)};

        if (cfg.wiring == "features") {
            in.g_x = knn_graph(spade::PointSet{spade::RowMatrix(data.features)}, cfg);
        } else {
            in.g_x = data.graph;
        }
        in.g_y = spade::ensure_nullspace_containment(knn_graph(emb_pts, cfg), in.g_x,
                                                     emb_pts);
        in.inputs_manifest["dataset"] = cfg.dataset_dir;
        in.inputs_manifest["wiring"] = cfg.wiring;
        in.dataset = std::move(data);
        in.trained = std::move(trained);
        return in;
    }

    if (!direct_x || !direct_y) {
        throw spade::ParameterError("both a G_X source and a G_Y source are required");
    }
    if (!cfg.graph_x_path.empty()) {
        in.g_x = spade::read_edge_tsv(cfg.graph_x_path);
        in.inputs_manifest["graph_x"] = {{"path", cfg.graph_x_path},
                                         {"fnv1a", spade::fnv1a_file(cfg.graph_x_path)}};
    } else {
        in.g_x = knn_graph(spade::PointSet{spade::RowMatrix(
                               spade::read_csv_matrix(cfg.features_x_path))},
                           cfg);
        in.inputs_manifest["features_x"] = {
            {"path", cfg.features_x_path},
            {"fnv1a", spade::fnv1a_file(cfg.features_x_path)}};
    }
    if (!cfg.graph_y_path.empty()) {
        in.g_y = spade::read_edge_tsv(cfg.graph_y_path);
        if (in.g_y.n_nodes() < in.g_x.n_nodes()) {
            // ids are dense; a TSV can omit trailing isolated nodes
            in.g_y = spade::read_edge_tsv(cfg.graph_y_path, in.g_x.n_nodes());
        }
        in.inputs_manifest["graph_y"] = {{"path", cfg.graph_y_path},
                                         {"fnv1a", spade::fnv1a_file(cfg.graph_y_path)}};
    } else {
        spade::PointSet pts{
            spade::RowMatrix(spade::read_csv_matrix(cfg.features_y_path))};
        in.g_y = spade::ensure_nullspace_containment(knn_graph(pts, cfg), in.g_x, pts);
        in.inputs_manifest["features_y"] = {
            {"path", cfg.features_y_path},
            {"fnv1a", spade::fnv1a_file(cfg.features_y_path)}};
    }
    if (in.g_x.n_nodes() != in.g_y.n_nodes()) {
        throw spade::ParameterError("G_X and G_Y node counts differ (" +
                                    std::to_string(in.g_x.n_nodes()) + " vs " +
                                    std::to_string(in.g_y.n_nodes()) + ")");
    }
    return in;
}

spade::ScoreReport score_inputs(const ScoringInputs& in, const RunConfig& cfg) {
    spade::ScoreOptions opts;
    opts.s = cfg.s;
    opts.tol = cfg.tol;
    if (cfg.solver == "dense") opts.solver = spade::SolverChoice::kDense;
    if (cfg.solver == "iterative") opts.solver = spade::SolverChoice::kIterative;
    return spade::score_graph_report(in.g_x, in.g_y, opts);
}

json base_manifest(const std::string& command, const RunConfig& cfg,
                   const ScoringInputs* in) {
    json m;
    m["command"] = command;
    m["parameters"] = {{"k", cfg.k},          {"s", cfg.s},
                       {"seed", cfg.seed},    {"knn_mode", cfg.knn_mode},
                       {"tol", cfg.tol},      {"quality", cfg.quality}};
    if (in) m["inputs"] = in->inputs_manifest;
    return m;
}

void attach_eigenvalues(json& manifest, const spade::EigenPairs& pairs) {
    manifest["eigenvalues"] = std::vector<double>(
        pairs.eigenvalues.data(), pairs.eigenvalues.data() + pairs.eigenvalues.size());
}

void write_manifest(const RunConfig& cfg, json manifest,
                    const std::vector<std::string>& outputs) {
    json files = json::object();
    for (const std::string& name : outputs) {
        files[name] = spade::fnv1a_file((fs::path(cfg.out_dir) / name).string());
    }
    manifest["outputs"] = files;
    std::ofstream out(fs::path(cfg.out_dir) / "manifest.json");
    if (!out) throw spade::IoError("cannot write manifest.json in " + cfg.out_dir);
    out << manifest.dump(2) << '\n';
}

void write_node_scores(const RunConfig& cfg, const spade::SpadeScores& scores) {
    std::ofstream out(fs::path(cfg.out_dir) / "node_scores.csv");
    if (!out) throw spade::IoError("cannot write node_scores.csv in " + cfg.out_dir);
    out << "node_id,score\n";
    for (int p = 0; p < scores.n_nodes(); ++p) {
        out << p << ',' << spade::format_double(scores.node_scores[p]) << '\n';
    }
}

void write_edge_scores(const RunConfig& cfg, const spade::SpadeScores& scores) {
    std::ofstream out(fs::path(cfg.out_dir) / "edge_scores.csv");
    if (!out) throw spade::IoError("cannot write edge_scores.csv in " + cfg.out_dir);
    out << "u,v,score\n";
    for (size_t i = 0; i < scores.edges.size(); ++i) {
        out << scores.edges[i].first << ',' << scores.edges[i].second << ','
            << spade::format_double(scores.edge_scores[i]) << '\n';
    }
}

int cmd_score(const RunConfig& cfg, bool nodes) {
    fs::create_directories(cfg.out_dir);
    ScoringInputs in = resolve_scoring_inputs(cfg);
    spade::ScoreReport report = score_inputs(in, cfg);
    json manifest = base_manifest(nodes ? "score-nodes" : "score-edges", cfg, &in);
    attach_eigenvalues(manifest, report.pairs);
    std::vector<std::string> outputs;
    if (nodes) {
        write_node_scores(cfg, report.scores);
        json scores_json{{"node_scores", report.scores.node_scores},
                         {"ranking", report.scores.ranking}};
        std::ofstream out(fs::path(cfg.out_dir) / "scores.json");
        if (!out) throw spade::IoError("cannot write scores.json in " + cfg.out_dir);
        out << scores_json.dump(2) << '\n';
        outputs.push_back("node_scores.csv");
        outputs.push_back("scores.json");
    } else {
        write_edge_scores(cfg, report.scores);
        outputs.push_back("edge_scores.csv");
    }
    write_manifest(cfg, std::move(manifest), outputs);
    return 0;
}

int cmd_experiment(const RunConfig& cfg) {
    if (cfg.dataset_dir.empty()) {
        throw spade::ParameterError("experiment requires --dataset");
    }
    fs::create_directories(cfg.out_dir);
    spade::LabeledDataset data = spade::load_citation_dir(
        cfg.dataset_dir, cfg.train_fraction, cfg.effective_split_seed());
    spade::TrainConfig tc{cfg.learning_rate, cfg.weight_decay, cfg.epochs, cfg.seed,
                          cfg.hidden_dim};
    spade::ExperimentOptions opts;
    opts.fraction = cfg.fraction;
    opts.k = cfg.k;
    opts.s = cfg.s;
    spade::ExperimentResult result = spade::run_selection_experiment(data, tc, cfg.seed,
                                                                     opts);

    {
        std::ofstream out(fs::path(cfg.out_dir) / "experiment.csv");
        if (!out) throw spade::IoError("cannot write experiment.csv in " + cfg.out_dir);
        out << "arm,epoch,accuracy\n";
        for (const auto& row : result.rows) {
            out << row.arm << ',' << row.epoch << ','
                << spade::format_double(row.accuracy) << '\n';
        }
    }
    {
        std::ofstream out(fs::path(cfg.out_dir) / "selected.csv");
        if (!out) throw spade::IoError("cannot write selected.csv in " + cfg.out_dir);
        out << "node_id\n";
        for (int id : result.selection.selected) out << id << '\n';
    }
    json manifest = base_manifest("experiment", cfg, nullptr);
    manifest["inputs"] = {{"dataset", cfg.dataset_dir}};
    manifest["parameters"]["fraction"] = cfg.fraction;
    manifest["parameters"]["epochs"] = cfg.epochs;
    manifest["parameters"]["lr"] = cfg.learning_rate;
    manifest["parameters"]["split_seed"] = cfg.effective_split_seed();
    manifest["selection"] = {{"size", result.selection.selected.size()},
                             {"threshold_score", result.selection.threshold_score},
                             {"selected", result.selection.selected}};
    write_manifest(cfg, std::move(manifest), {"experiment.csv", "selected.csv"});
    return 0;
}

int cmd_prune(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    ScoringInputs in = resolve_scoring_inputs(cfg);
    spade::ScoreReport report = score_inputs(in, cfg);
    spade::Graph pruned = spade::prune_edges(in.g_x, report.scores, cfg.ratio);
    spade::write_edge_tsv((fs::path(cfg.out_dir) / "pruned.tsv").string(), pruned);
    json manifest = base_manifest("prune", cfg, &in);
    manifest["parameters"]["ratio"] = cfg.ratio;
    attach_eigenvalues(manifest, report.pairs);
    manifest["removed_edges"] = in.g_x.n_edges() - pruned.n_edges();
    write_manifest(cfg, std::move(manifest), {"pruned.tsv"});
    return 0;
}

json pairs_to_json(const std::vector<std::pair<int, int>>& pairs) {
    json arr = json::array();
    for (const auto& [u, v] : pairs) arr.push_back({u, v});
    return arr;
}

int cmd_attack_del(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    ScoringInputs in = resolve_scoring_inputs(cfg);
    spade::ScoreReport report = score_inputs(in, cfg);
    spade::AttackResult result = spade::attack_delete(in.g_x, report.scores, cfg.budget);
    spade::write_edge_tsv((fs::path(cfg.out_dir) / "attacked.tsv").string(),
                          result.modified_graph);
    json manifest = base_manifest("attack-del", cfg, &in);
    manifest["parameters"]["budget"] = cfg.budget;
    manifest["changed_edges"] = pairs_to_json(result.changed_edges);
    manifest["budget_used"] = result.budget_used;
    if (in.dataset && in.trained) {
        spade::AttackAssessment a =
            spade::measure_attack(*in.dataset, in.trained->model, result.modified_graph);
        manifest["assessment"] = {{"accuracy_before", a.accuracy_before},
                                  {"accuracy_after", a.accuracy_after},
                                  {"asr", a.asr}};
    }
    write_manifest(cfg, std::move(manifest), {"attacked.tsv"});
    return 0;
}

int cmd_attack_add(const RunConfig& cfg) {
    if (cfg.dataset_dir.empty()) {
        throw spade::ParameterError(
            "attack-add requires --dataset (labels and predictions come from the "
            "trained model)");
    }
    fs::create_directories(cfg.out_dir);
    ScoringInputs in = resolve_scoring_inputs(cfg);
    spade::ScoreReport report = score_inputs(in, cfg);
    const spade::LabeledDataset& data = *in.dataset;
    const std::vector<int> predictions = spade::argmax_predictions(
        spade::gcn_forward(in.trained->model, data.features).logits);
    spade::AttackResult result =
        spade::attack_add(data.graph, report.basis, data.labels, predictions,
                          data.test_mask, cfg.budget, cfg.k_prime);
    spade::write_edge_tsv((fs::path(cfg.out_dir) / "attacked.tsv").string(),
                          result.modified_graph);
    json manifest = base_manifest("attack-add", cfg, &in);
    manifest["parameters"]["budget"] = cfg.budget;
    manifest["parameters"]["k_prime"] = cfg.k_prime;
    manifest["inserted_edges"] = pairs_to_json(result.changed_edges);
    manifest["budget_used"] = result.budget_used;
    spade::AttackAssessment a =
        spade::measure_attack(data, in.trained->model, result.modified_graph);
    manifest["assessment"] = {{"accuracy_before", a.accuracy_before},
                              {"accuracy_after", a.accuracy_after},
                              {"asr", a.asr}};
    write_manifest(cfg, std::move(manifest), {"attacked.tsv"});
    return 0;
}

int cmd_hpart(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    spade::Hypergraph h = spade::read_hmetis(cfg.hgr_path);
    spade::HyperPartOptions opts;
    opts.n_blocks = cfg.n_blocks;
    opts.robust_fraction = cfg.robust_fraction;
    opts.K = cfg.embed_k;
    opts.k = cfg.k;
    opts.s = cfg.s;
    opts.seed = cfg.seed;
    opts.selection = cfg.selection == "bottom-nonzero"
                         ? spade::EigSelection::kBottomNonzero
                         : spade::EigSelection::kLargestMagnitude;
    spade::HyperPartResult result = spade::partition_pipeline(h, opts);

    spade::write_partition((fs::path(cfg.out_dir) / "partition.txt").string(),
                           result.partition.assignment);
    json metrics = {{"phi", result.phi},
                    {"n_blocks", cfg.n_blocks},
                    {"robust_fraction", cfg.robust_fraction},
                    {"seed", cfg.seed}};
    {
        std::ofstream out(fs::path(cfg.out_dir) / "metrics.json");
        if (!out) throw spade::IoError("cannot write metrics.json in " + cfg.out_dir);
        out << metrics.dump(2) << '\n';
    }
    json manifest = base_manifest("hpart", cfg, nullptr);
    manifest["inputs"] = {{"hgr", {{"path", cfg.hgr_path},
                                   {"fnv1a", spade::fnv1a_file(cfg.hgr_path)}}}};
    manifest["parameters"]["n_blocks"] = cfg.n_blocks;
    manifest["parameters"]["robust_fraction"] = cfg.robust_fraction;
    manifest["parameters"]["K"] = cfg.embed_k;
    manifest["parameters"]["selection"] = cfg.selection;
    manifest["phi"] = result.phi;
    write_manifest(cfg, std::move(manifest), {"partition.txt", "metrics.json"});
    return 0;
}

int cmd_conductance(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    spade::Hypergraph h = spade::read_hmetis(cfg.hgr_path);
    std::vector<int> assignment = spade::read_partition(cfg.partition_path);
    if (static_cast<int>(assignment.size()) != h.n_nodes()) {
        throw spade::ParameterError("partition file has " +
                                    std::to_string(assignment.size()) + " rows but the "
                                    "hypergraph has " + std::to_string(h.n_nodes()) +
                                    " nodes");
    }
    spade::Partition part;
    part.assignment = std::move(assignment);
    part.n_blocks = 0;
    for (int b : part.assignment) part.n_blocks = std::max(part.n_blocks, b + 1);
    const double phi = spade::local_conductance(h, part);

    json metrics = {{"phi", phi}, {"n_blocks", part.n_blocks}};
    {
        std::ofstream out(fs::path(cfg.out_dir) / "metrics.json");
        if (!out) throw spade::IoError("cannot write metrics.json in " + cfg.out_dir);
        out << metrics.dump(2) << '\n';
    }
    json manifest = base_manifest("conductance", cfg, nullptr);
    manifest["inputs"] = {
        {"hgr", {{"path", cfg.hgr_path}, {"fnv1a", spade::fnv1a_file(cfg.hgr_path)}}},
        {"partition",
         {{"path", cfg.partition_path}, {"fnv1a", spade::fnv1a_file(cfg.partition_path)}}}};
    manifest["phi"] = phi;
    write_manifest(cfg, std::move(manifest), {"metrics.json"});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral adversarial-robustness scoring toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* score_nodes = app.add_subcommand("score-nodes", "per-node Spade scores");
    CLI::App* score_edges = app.add_subcommand("score-edges", "per-edge Spade scores");
    for (CLI::App* cmd : {score_nodes, score_edges}) {
        add_common_flags(cmd, cfg);
        add_score_input_flags(cmd, cfg);
        add_knn_flags(cmd, cfg);
        add_solver_flags(cmd, cfg);
        add_train_flags(cmd, cfg);
    }

    CLI::App* experiment =
        app.add_subcommand("experiment", "three-arm training-set selection comparison");
    add_common_flags(experiment, cfg);
    experiment->add_option("--dataset", cfg.dataset_dir, "citation dataset dir")
        ->required();
    experiment->add_option("--fraction", cfg.fraction, "selected training fraction");
    add_knn_flags(experiment, cfg);
    add_solver_flags(experiment, cfg);
    add_train_flags(experiment, cfg);

    CLI::App* prune = app.add_subcommand("prune", "remove the highest-score edges");
    add_common_flags(prune, cfg);
    add_score_input_flags(prune, cfg);
    prune->add_option("--ratio", cfg.ratio, "fraction of edges to prune")->required();
    add_knn_flags(prune, cfg);
    add_solver_flags(prune, cfg);
    add_train_flags(prune, cfg);

    CLI::App* attack_del =
        app.add_subcommand("attack-del", "delete the lowest-score edges");
    add_common_flags(attack_del, cfg);
    add_score_input_flags(attack_del, cfg);
    attack_del->add_option("--budget", cfg.budget, "edges to delete")->required();
    add_knn_flags(attack_del, cfg);
    add_solver_flags(attack_del, cfg);
    add_train_flags(attack_del, cfg);

    CLI::App* attack_add =
        app.add_subcommand("attack-add", "insert spectrally incompatible edges");
    add_common_flags(attack_add, cfg);
    add_score_input_flags(attack_add, cfg);
    attack_add->add_option("--budget", cfg.budget, "edges to insert")->required();
    attack_add->add_option("--k-prime", cfg.k_prime, "farthest-candidate width");
    add_knn_flags(attack_add, cfg);
    add_solver_flags(attack_add, cfg);
    add_train_flags(attack_add, cfg);

    CLI::App* hpart = app.add_subcommand("hpart", "robust-node hypergraph partitioning");
    add_common_flags(hpart, cfg);
    hpart->add_option("--hgr", cfg.hgr_path, "hMETIS hypergraph file")->required();
    hpart->add_option("--blocks", cfg.n_blocks, "number of blocks");
    hpart->add_option("--robust-fraction", cfg.robust_fraction,
                      "fraction of nodes treated as robust");
    hpart->add_option("--K", cfg.embed_k, "embedding eigenvector count");
    hpart->add_option("--selection", cfg.selection,
                      "largest-magnitude | bottom-nonzero eigenvector selection")
        ->check(CLI::IsMember({"largest-magnitude", "bottom-nonzero"}));
    add_knn_flags(hpart, cfg);
    add_solver_flags(hpart, cfg);

    CLI::App* conductance =
        app.add_subcommand("conductance", "local conductance of a stored partition");
    add_common_flags(conductance, cfg);
    conductance->add_option("--hgr", cfg.hgr_path, "hMETIS hypergraph file")->required();
    conductance->add_option("--partition", cfg.partition_path,
                            "partition file, one block id per line")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (score_nodes->parsed()) return cmd_score(cfg, /*nodes=*/true);
        if (score_edges->parsed()) return cmd_score(cfg, /*nodes=*/false);
        if (experiment->parsed()) return cmd_experiment(cfg);
        if (prune->parsed()) return cmd_prune(cfg);
        if (attack_del->parsed()) return cmd_attack_del(cfg);
        if (attack_add->parsed()) return cmd_attack_add(cfg);
        if (hpart->parsed()) return cmd_hpart(cfg);
        if (conductance->parsed()) return cmd_conductance(cfg);
    } catch (const spade::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.category()) {
            case spade::ErrorCategory::kParameter: return 1;
            case spade::ErrorCategory::kNumeric: return 2;
            case spade::ErrorCategory::kIo: return 3;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
