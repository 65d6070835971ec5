// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spade/gcn.hpp"
#include "spade/graph.hpp"
#include "spade/scores.hpp"

namespace spade {

struct SelectionResult {
    std::vector<int> selected;  // descending score order
    double fraction = 0.0;
    double threshold_score = 0.0;  // score of the last selected node
};

/// Top ceil(fraction * |train|) training nodes by descending Spade score,
/// ties broken by ascending id.
SelectionResult select_noise_sensitive(const SpadeScores& scores,
                                       const std::vector<int>& train_ids,
                                       double fraction);

struct ExperimentRow {
    std::string arm;  // "Ours", "Random" or "Full"
    int epoch = 0;    // 1-based
    double accuracy = 0.0;
};

struct ExperimentOptions {
    double fraction = 0.8;
    int k = 20;
    int s = 10;
    /// Exact kNN up to this many nodes, approximate beyond.
    int approx_threshold = 10000;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;  // 3 arms x epochs
    SelectionResult selection;
};

/// Three-arm training comparison. Phase 1 trains on the full training set
/// and doubles as the Full arm; its hidden embedding drives the kNN
/// manifolds (G_X from raw features, G_Y from the embedding), the Spade
/// ranking selects the Ours arm, and a seeded uniform sample of equal size
/// forms the Random arm.
ExperimentResult run_selection_experiment(const LabeledDataset& data,
                                          const TrainConfig& cfg, uint64_t seed,
                                          const ExperimentOptions& opts = {});

/// Removes the ceil(ratio * |E|) highest-score edges (defensive pruning).
Graph prune_edges(const Graph& g, const SpadeScores& edge_scores, double ratio);

struct AttackResult {
    Graph modified_graph;
    std::vector<std::pair<int, int>> changed_edges;
    int budget_used = 0;
};

/// Deletes the budget lowest-score edges, the spectral dual of pruning.
AttackResult attack_delete(const Graph& g, const SpadeScores& edge_scores, int budget);

/// Inserts up to `budget` weight-1 edges between spectrally incompatible
/// nodes: for each correctly-predicted test node, the farthest
/// different-label non-neighbor among its k_prime farthest different-label
/// candidates in the embedding; retained candidates are pooled and the
/// top-budget by score inserted.
AttackResult attack_add(const Graph& g, const WeightedEigenbasis& basis,
                        const std::vector<int>& labels,
                        const std::vector<int>& predictions,
                        const std::vector<uint8_t>& test_mask, int budget,
                        int k_prime = 10);

struct AttackAssessment {
    double accuracy_before = 0.0;
    double accuracy_after = 0.0;
    double asr = 0.0;  // originally-correct test nodes now misclassified
};

/// Re-runs the trained model on the attacked graph with frozen weights.
AttackAssessment measure_attack(const LabeledDataset& data, const GcnModel& model,
                                const Graph& attacked);

}  // namespace spade
