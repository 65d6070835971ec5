// SPDX-License-Identifier: Apache-2.0
#include "spade/apps.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "spade/errors.hpp"
#include "spade/knn.hpp"
#include "spade/point_set.hpp"
#include "spade/rng.hpp"

namespace spade {

SelectionResult select_noise_sensitive(const SpadeScores& scores,
                                       const std::vector<int>& train_ids,
                                       double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ParameterError("select_noise_sensitive: fraction must lie in (0,1]");
    }
    if (train_ids.empty()) {
        throw ParameterError("select_noise_sensitive: empty training set");
    }
    for (int id : train_ids) {
        if (id < 0 || id >= scores.n_nodes()) {
            throw ParameterError("select_noise_sensitive: train id " + std::to_string(id) +
                                 " out of range");
        }
    }
    SelectionResult result;
    result.fraction = fraction;
    result.selected = train_ids;
    std::sort(result.selected.begin(), result.selected.end(), [&](int a, int b) {
        const double sa = scores.node_scores[a], sb = scores.node_scores[b];
        return sa != sb ? sa > sb : a < b;
    });
    const auto n_select = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(train_ids.size())));
    result.selected.resize(std::min(n_select, result.selected.size()));
    result.threshold_score = scores.node_scores[result.selected.back()];
    return result;
}

ExperimentResult run_selection_experiment(const LabeledDataset& data,
                                          const TrainConfig& cfg, uint64_t seed,
                                          const ExperimentOptions& opts) {
    data.validate();
    const std::vector<int> train_ids = data.train_ids();
    if (train_ids.empty()) throw ParameterError("experiment: empty training set");

    // Phase 1: full-set training; this run is also the Full arm.
    TrainResult full = gcn_train(data, cfg);
    const DenseMatrix embedding = gcn_embed(full.model, data);

    // Phase 2: manifolds of the raw features and of the embedding.
    auto knn_of = [&](const DenseMatrix& coords) {
        PointSet pts((RowMatrix(coords)));
        return pts.n_points() <= opts.approx_threshold ? knn_exact(pts, opts.k)
                                                       : knn_approx(pts, opts.k);
    };
    Graph g_x = knn_of(data.features);
    Graph g_y = knn_of(embedding);
    g_y = ensure_nullspace_containment(g_y, g_x, PointSet((RowMatrix(embedding))));

    // Phase 3: Spade scores; Phase 4: selective retraining.
    ScoreOptions score_opts;
    score_opts.s = opts.s;
    ExperimentResult result;
    const SpadeScores scores = score_graph_report(g_x, g_y, score_opts).scores;
    result.selection = select_noise_sensitive(scores, train_ids, opts.fraction);

    auto train_on = [&](const std::vector<int>& ids) {
        LabeledDataset subset = data;
        subset.train_mask.assign(data.n_nodes(), 0);
        for (int id : ids) subset.train_mask[id] = 1;
        return gcn_train(subset, cfg);
    };
    TrainResult ours = train_on(result.selection.selected);

    Rng rng(seed);
    std::vector<int> shuffled = train_ids;
    rng.shuffle(shuffled);
    shuffled.resize(result.selection.selected.size());
    TrainResult random_arm = train_on(shuffled);

    auto emit = [&](const std::string& arm, const TrainResult& r) {
        for (int e = 0; e < cfg.epochs; ++e) {
            result.rows.push_back({arm, e + 1, r.test_accuracy[e]});
        }
    };
    emit("Ours", ours);
    emit("Random", random_arm);
    emit("Full", full);
    return result;
}

namespace {

// Edge order shared by pruning and deletion: the two operations consume
// opposite ends of the same ranking.
std::vector<int> edges_by_score(const Graph& g, const SpadeScores& scores,
                                bool descending) {
    std::vector<double> per_edge(g.n_edges());
    for (int i = 0; i < g.n_edges(); ++i) {
        per_edge[i] = scores.edge_score_of(g.edges()[i].u, g.edges()[i].v);
    }
    std::vector<int> order(g.n_edges());
    for (int i = 0; i < g.n_edges(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (per_edge[a] != per_edge[b]) {
            return descending ? per_edge[a] > per_edge[b] : per_edge[a] < per_edge[b];
        }
        const Edge& ea = g.edges()[a];
        const Edge& eb = g.edges()[b];
        return ea.u != eb.u ? ea.u < eb.u : ea.v < eb.v;
    });
    return order;
}

Graph drop_edges(const Graph& g, const std::vector<int>& order, int n_drop,
                 std::vector<std::pair<int, int>>* dropped) {
    std::vector<bool> remove(g.n_edges(), false);
    for (int i = 0; i < n_drop; ++i) {
        remove[order[i]] = true;
        if (dropped) dropped->emplace_back(g.edges()[order[i]].u, g.edges()[order[i]].v);
    }
    std::vector<Edge> kept;
    kept.reserve(g.n_edges() - n_drop);
    for (int i = 0; i < g.n_edges(); ++i) {
        if (!remove[i]) kept.push_back(g.edges()[i]);
    }
    return Graph(g.n_nodes(), std::move(kept));
}

}  // namespace

Graph prune_edges(const Graph& g, const SpadeScores& edge_scores, double ratio) {
    if (!(ratio >= 0.0) || ratio >= 1.0) {
        throw ParameterError("prune_edges: ratio must lie in [0,1)");
    }
    const int n_remove = static_cast<int>(std::ceil(ratio * g.n_edges()));
    if (n_remove == 0) return g;
    return drop_edges(g, edges_by_score(g, edge_scores, /*descending=*/true), n_remove,
                      nullptr);
}

AttackResult attack_delete(const Graph& g, const SpadeScores& edge_scores, int budget) {
    if (budget < 0 || budget > g.n_edges()) {
        throw ParameterError("attack_delete: budget " + std::to_string(budget) +
                             " outside [0,|E|=" + std::to_string(g.n_edges()) + "]");
    }
    AttackResult result;
    result.modified_graph =
        drop_edges(g, edges_by_score(g, edge_scores, /*descending=*/false), budget,
                   &result.changed_edges);
    result.budget_used = budget;
    return result;
}

AttackResult attack_add(const Graph& g, const WeightedEigenbasis& basis,
                        const std::vector<int>& labels,
                        const std::vector<int>& predictions,
                        const std::vector<uint8_t>& test_mask, int budget,
                        int k_prime) {
    const int n = g.n_nodes();
    if (budget < 1) throw ParameterError("attack_add: budget must be >= 1");
    if (k_prime < 1) throw ParameterError("attack_add: k_prime must be >= 1");
    if (static_cast<int>(labels.size()) != n ||
        static_cast<int>(predictions.size()) != n ||
        static_cast<int>(test_mask.size()) != n || basis.matrix.rows() != n) {
        throw ParameterError("attack_add: input sizes disagree with the graph");
    }

    std::vector<int> targets;
    for (int p = 0; p < n; ++p) {
        if (test_mask[p] && predictions[p] == labels[p]) targets.push_back(p);
    }
    if (targets.empty()) {
        throw ParameterError(
            "attack_add: no candidates; every test node is already misclassified "
            "(constraint: target must be a correctly-predicted test node)");
    }

    // Stage 1: per target, the k' farthest different-label nodes in the
    // embedding; the farthest one that is not already a neighbor survives.
    struct Candidate {
        double score;
        int p, q;
    };
    std::vector<Candidate> retained;
    bool any_different_label = false;
    for (int p : targets) {
        std::vector<std::pair<double, int>> far;  // (-score, id): ascending sort
        for (int q = 0; q < n; ++q) {
            if (labels[q] == labels[p]) continue;
            any_different_label = true;
            far.push_back({-edge_score(basis, p, q), q});
        }
        if (far.empty()) continue;
        const auto k_far = std::min<size_t>(k_prime, far.size());
        std::partial_sort(far.begin(), far.begin() + k_far, far.end());
        for (size_t i = 0; i < k_far; ++i) {
            const int q = far[i].second;
            if (q == p || g.has_edge(p, q)) continue;
            retained.push_back({-far[i].first, p, q});
            break;  // farthest eligible candidate only
        }
    }
    if (!any_different_label) {
        throw ParameterError(
            "attack_add: no candidates; all nodes share one class "
            "(constraint: endpoints must have different labels)");
    }
    if (retained.empty()) {
        throw ParameterError(
            "attack_add: no candidates; every far candidate is already a neighbor "
            "(constraint: inserted pairs must be non-edges)");
    }

    // Stage 2: pool, dedupe unordered pairs, take the top-budget by score.
    std::sort(retained.begin(), retained.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto pa = std::minmax(a.p, a.q), pb = std::minmax(b.p, b.q);
        return pa < pb;
    });
    AttackResult result;
    std::set<std::pair<int, int>> chosen;
    std::vector<Edge> edges = g.edges();
    for (const Candidate& c : retained) {
        if (static_cast<int>(chosen.size()) >= budget) break;
        const auto pair = std::minmax(c.p, c.q);
        if (!chosen.emplace(pair.first, pair.second).second) continue;
        edges.push_back({pair.first, pair.second, 1.0});
        result.changed_edges.emplace_back(pair.first, pair.second);
    }
    result.budget_used = static_cast<int>(result.changed_edges.size());
    result.modified_graph = Graph(n, std::move(edges));
    return result;
}

AttackAssessment measure_attack(const LabeledDataset& data, const GcnModel& model,
                                const Graph& attacked) {
    const GcnActivations before = gcn_forward(model, data.features);
    const GcnActivations after = gcn_forward_on(model, attacked, data.features);
    AttackAssessment out;
    out.accuracy_before = evaluate_accuracy(before.logits, data.labels, data.test_mask);
    out.accuracy_after = evaluate_accuracy(after.logits, data.labels, data.test_mask);

    const std::vector<int> pred_before = argmax_predictions(before.logits);
    const std::vector<int> pred_after = argmax_predictions(after.logits);
    int originally_correct = 0, flipped = 0;
    for (int i = 0; i < data.n_nodes(); ++i) {
        if (!data.test_mask[i] || pred_before[i] != data.labels[i]) continue;
        ++originally_correct;
        if (pred_after[i] != data.labels[i]) ++flipped;
    }
    out.asr = originally_correct > 0
                  ? static_cast<double>(flipped) / originally_correct
                  : 0.0;
    return out;
}

}  // namespace spade
