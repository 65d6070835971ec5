// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "spade/apps.hpp"
#include "spade/errors.hpp"
#include "spade/knn.hpp"
#include "spade/laplacian.hpp"
#include "spade/point_set.hpp"
#include "test_util.hpp"

using namespace spade;
using spade::testing::random_connected_graph;
using spade::testing::two_cluster_dataset;

namespace {

SpadeScores fake_scores(const std::vector<double>& node_scores) {
    SpadeScores s;
    s.node_scores = node_scores;
    s.ranking = rank_descending(node_scores);
    return s;
}

SpadeScores scores_for(const Graph& g, const std::vector<double>& edge_scores,
                       bool with_nodes = true) {
    SpadeScores s;
    for (const Edge& e : g.edges()) s.edges.emplace_back(e.u, e.v);
    s.edge_scores = edge_scores;
    if (with_nodes) {
        s.node_scores.assign(g.n_nodes(), 0.0);
        for (int p = 0; p < g.n_nodes(); ++p) {
            auto inc = g.incident_edges(p);
            double sum = 0.0;
            for (int e : inc) sum += edge_scores[e];
            if (!inc.empty()) s.node_scores[p] = sum / inc.size();
        }
        s.ranking = rank_descending(s.node_scores);
    }
    return s;
}

std::set<std::pair<int, int>> pair_set(const std::vector<std::pair<int, int>>& v) {
    return {v.begin(), v.end()};
}

// End-to-end fixture for the attack tests: trained model, embedding-based
// scores with the original graph as G_X (the pruning wiring).
struct AttackFixture {
    LabeledDataset data;
    TrainResult trained;
    ScoreReport report;
    std::vector<int> predictions;

    AttackFixture(uint64_t seed, double feature_noise, double p_intra, double p_inter,
                  int n_per = 20, int epochs = 80) {
        data = two_cluster_dataset(n_per, 8, feature_noise, p_intra, p_inter, seed);
        TrainConfig cfg;
        cfg.learning_rate = 0.05;
        cfg.epochs = epochs;
        cfg.seed = seed + 1;
        cfg.hidden_dim = 16;
        trained = gcn_train(data, cfg);
        DenseMatrix embedding = gcn_embed(trained.model, data);
        Graph g_y = knn_exact(PointSet((RowMatrix(embedding))), 8);
        g_y = ensure_nullspace_containment(g_y, data.graph,
                                           PointSet((RowMatrix(embedding))));
        ScoreOptions opts;
        opts.s = 8;
        report = score_graph_report(data.graph, g_y, opts);
        predictions = argmax_predictions(gcn_forward(trained.model, data.features).logits);
    }
};

}  // namespace

TEST_CASE("selection keeps the whole set at fraction 1") {
    SpadeScores s = fake_scores({0.3, 0.9, 0.1, 0.5});
    std::vector<int> train{0, 1, 2, 3};
    SelectionResult r = select_noise_sensitive(s, train, 1.0);
    CHECK(r.selected.size() == 4);
    CHECK(r.selected == std::vector<int>{1, 3, 0, 2});  // descending score
}

TEST_CASE("selection takes ceil(fraction * train) top scores") {
    SpadeScores s = fake_scores({9.0, 7.0, 5.0, 3.0, 1.0});
    SelectionResult r = select_noise_sensitive(s, {0, 1, 2, 3, 4}, 0.8);
    CHECK(r.selected == std::vector<int>{0, 1, 2, 3});
    CHECK(r.threshold_score == doctest::Approx(3.0));

    CHECK_THROWS_AS(select_noise_sensitive(s, {0, 1}, 0.0), ParameterError);
    CHECK_THROWS_AS(select_noise_sensitive(s, {0, 1}, 1.5), ParameterError);
    CHECK_THROWS_AS(select_noise_sensitive(s, {}, 0.5), ParameterError);
}

TEST_CASE("selection agrees with a sort-then-slice oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + rng.uniform_int(40);
        std::vector<double> scores(n);
        for (double& v : scores) v = rng.uniform(0.0, 3.0);
        std::vector<int> train;
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < 0.6) train.push_back(i);
        }
        if (train.empty()) continue;
        const double fraction = 0.05 + 0.95 * rng.uniform();

        SelectionResult r = select_noise_sensitive(fake_scores(scores), train, fraction);

        auto expect = train;
        std::stable_sort(expect.begin(), expect.end(), [&](int a, int b) {
            return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
        });
        expect.resize(static_cast<size_t>(std::ceil(fraction * train.size())));
        CHECK(r.selected == expect);
    }
}

TEST_CASE("prune_edges leaves the graph alone at ratio 0") {
    Rng rng(2);
    Graph g = random_connected_graph(12, 10, rng);
    std::vector<double> es(g.n_edges());
    for (double& v : es) v = rng.uniform();
    CHECK(prune_edges(g, scores_for(g, es), 0.0) == g);
    CHECK_THROWS_AS(prune_edges(g, scores_for(g, es), 1.0), ParameterError);
}

TEST_CASE("prune_edges removes exactly ceil(ratio * E) top-score edges") {
    Graph g(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}});
    SpadeScores s = scores_for(g, {0.9, 0.1, 0.7, 0.3, 0.5});
    Graph pruned = prune_edges(g, s, 0.4);  // ceil(2.0) = 2 edges: scores 0.9, 0.7
    CHECK(pruned.n_edges() == 3);
    CHECK(!pruned.has_edge(0, 1));
    CHECK(!pruned.has_edge(2, 3));
    CHECK(pruned.has_edge(1, 2));
    CHECK(pruned.n_nodes() == 6);
}

TEST_CASE("prune_edges matches a sort-and-remove oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = random_connected_graph(15, 12, rng);
        std::vector<double> es(g.n_edges());
        for (double& v : es) v = rng.uniform();
        const double ratio = rng.uniform() * 0.9;
        Graph pruned = prune_edges(g, scores_for(g, es), ratio);

        std::vector<int> order(g.n_edges());
        for (int i = 0; i < g.n_edges(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return es[a] != es[b] ? es[a] > es[b]
                                  : std::pair{g.edges()[a].u, g.edges()[a].v} <
                                        std::pair{g.edges()[b].u, g.edges()[b].v};
        });
        std::set<std::pair<int, int>> expect;
        for (size_t i = std::ceil(ratio * g.n_edges()); i < order.size(); ++i) {
            expect.emplace(g.edges()[order[i]].u, g.edges()[order[i]].v);
        }
        std::set<std::pair<int, int>> got;
        for (const Edge& e : pruned.edges()) got.emplace(e.u, e.v);
        CHECK(got == expect);
    }
}

TEST_CASE("attack_delete basics") {
    Graph g(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
    SpadeScores s = scores_for(g, {0.4, 0.2, 0.8, 0.6});

    AttackResult none = attack_delete(g, s, 0);
    CHECK(none.modified_graph == g);
    CHECK(none.changed_edges.empty());

    AttackResult all = attack_delete(g, s, 4);
    CHECK(all.modified_graph.n_edges() == 0);
    CHECK(all.modified_graph.n_nodes() == 5);
    CHECK(all.changed_edges.size() == 4);

    CHECK_THROWS_AS(attack_delete(g, s, 5), ParameterError);
}

TEST_CASE("attack_delete removes the ascending-score prefix") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = random_connected_graph(15, 14, rng);
        std::vector<double> es(g.n_edges());
        for (double& v : es) v = rng.uniform();
        const int budget = rng.uniform_int(g.n_edges() + 1);
        AttackResult r = attack_delete(g, scores_for(g, es), budget);

        std::vector<int> order(g.n_edges());
        for (int i = 0; i < g.n_edges(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return es[a] != es[b] ? es[a] < es[b]
                                  : std::pair{g.edges()[a].u, g.edges()[a].v} <
                                        std::pair{g.edges()[b].u, g.edges()[b].v};
        });
        std::set<std::pair<int, int>> expect;
        for (int i = 0; i < budget; ++i) {
            expect.emplace(g.edges()[order[i]].u, g.edges()[order[i]].v);
        }
        CHECK(pair_set(r.changed_edges) == expect);
        CHECK(r.modified_graph.n_edges() == g.n_edges() - budget);
    }
}

TEST_CASE("pruned and attacked edge sets are disjoint within budget") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_connected_graph(20, 25, rng);
        std::vector<double> es(g.n_edges());
        for (double& v : es) v = rng.uniform();
        SpadeScores s = scores_for(g, es);
        const double ratio = 0.3;
        const int n_pruned = static_cast<int>(std::ceil(ratio * g.n_edges()));
        const int budget = g.n_edges() - n_pruned;  // max budget still disjoint

        Graph pruned = prune_edges(g, s, ratio);
        AttackResult attacked = attack_delete(g, s, budget);
        // every deleted edge must survive pruning
        for (const auto& [u, v] : attacked.changed_edges) {
            CHECK(pruned.has_edge(u, v));
        }
    }
}

TEST_CASE("attack_add rejects instances without eligible candidates") {
    WeightedEigenbasis basis;
    basis.source_s = 2;
    basis.matrix = DenseMatrix::Random(4, 2);
    Graph g(4, {{0, 1, 1}, {2, 3, 1}});

    // every test node misclassified
    CHECK_THROWS_WITH_AS(
        attack_add(g, basis, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 1, 1}, 2),
        doctest::Contains("correctly-predicted"), ParameterError);

    // single class: no cross-label pair exists
    CHECK_THROWS_WITH_AS(attack_add(g, basis, {0, 0, 0, 0}, {0, 0, 0, 0}, {1, 1, 1, 1}, 2),
                         doctest::Contains("different labels"), ParameterError);

    // all far candidates already neighbors
    Graph complete(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    CHECK_THROWS_WITH_AS(
        attack_add(complete, basis, {0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}, 2),
        doctest::Contains("non-edges"), ParameterError);
}

TEST_CASE("attack_add with k_prime = n matches the exhaustive oracle") {
    AttackFixture fx(10, 0.5, 0.5, 0.06);
    const Graph& g = fx.data.graph;
    const int n = g.n_nodes();
    const int budget = 5;

    AttackResult got = attack_add(g, fx.report.basis, fx.data.labels, fx.predictions,
                                  fx.data.test_mask, budget, n);

    // Exhaustive oracle: per correctly-predicted test node, the single best
    // different-label non-neighbor; global top-budget by score.
    struct Cand {
        double score;
        std::pair<int, int> pair;
    };
    std::vector<Cand> pool;
    for (int p = 0; p < n; ++p) {
        if (!fx.data.test_mask[p] || fx.predictions[p] != fx.data.labels[p]) continue;
        double best = -1.0;
        int best_q = -1;
        for (int q = 0; q < n; ++q) {
            if (q == p || fx.data.labels[q] == fx.data.labels[p] || g.has_edge(p, q)) {
                continue;
            }
            const double sc = edge_score(fx.report.basis, p, q);
            if (sc > best || (sc == best && q < best_q)) {
                best = sc;
                best_q = q;
            }
        }
        if (best_q >= 0) pool.push_back({best, {std::min(p, best_q), std::max(p, best_q)}});
    }
    std::sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) {
        return a.score != b.score ? a.score > b.score : a.pair < b.pair;
    });
    std::set<std::pair<int, int>> expect;
    for (const Cand& c : pool) {
        if (static_cast<int>(expect.size()) >= budget) break;
        expect.insert(c.pair);
    }
    CHECK(pair_set(got.changed_edges) == expect);

    // reduced candidate width still overlaps heavily with the exhaustive set
    AttackResult narrow = attack_add(g, fx.report.basis, fx.data.labels, fx.predictions,
                                     fx.data.test_mask, budget, 5);
    int overlap = 0;
    for (const auto& e : narrow.changed_edges) overlap += expect.count(e);
    CHECK(static_cast<double>(overlap) >=
          0.8 * static_cast<double>(narrow.changed_edges.size()));
}

TEST_CASE("attack_add constraints hold on random instances") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 12 + rng.uniform_int(20);
        Graph g = random_connected_graph(n, n, rng);
        WeightedEigenbasis basis;
        basis.source_s = 4;
        basis.matrix.resize(n, 4);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 4; ++j) basis.matrix(i, j) = rng.normal();
        }
        std::vector<int> labels(n), predictions(n);
        std::vector<uint8_t> mask(n);
        for (int i = 0; i < n; ++i) {
            labels[i] = rng.uniform_int(3);
            predictions[i] = rng.uniform() < 0.7 ? labels[i] : rng.uniform_int(3);
            mask[i] = rng.uniform() < 0.5;
        }
        const int budget = 1 + rng.uniform_int(4);
        AttackResult r;
        try {
            r = attack_add(g, basis, labels, predictions, mask, budget,
                           1 + rng.uniform_int(n));
        } catch (const ParameterError&) {
            continue;  // instance had no eligible candidate
        }
        CHECK(r.modified_graph.n_nodes() == n);
        CHECK(static_cast<int>(r.changed_edges.size()) <= budget);
        CHECK(r.modified_graph.n_edges() ==
              g.n_edges() + static_cast<int>(r.changed_edges.size()));
        std::set<std::pair<int, int>> seen;
        for (const auto& [u, v] : r.changed_edges) {
            CHECK(u < v);
            CHECK(u != v);
            CHECK(!g.has_edge(u, v));                 // was a non-edge
            CHECK(labels[u] != labels[v]);            // crosses classes
            CHECK(seen.emplace(u, v).second);         // no duplicates
            const bool u_target = mask[u] && predictions[u] == labels[u];
            const bool v_target = mask[v] && predictions[v] == labels[v];
            CHECK((u_target || v_target));            // anchored at a target
        }
    }
}

TEST_CASE("measure_attack on the unmodified graph is a no-op") {
    AttackFixture fx(20, 0.5, 0.5, 0.06);
    AttackAssessment a = measure_attack(fx.data, fx.trained.model, fx.data.graph);
    CHECK(a.accuracy_before == a.accuracy_after);
    CHECK(a.asr == 0.0);
}

TEST_CASE("deleting every edge pushes accuracy toward the class prior") {
    // Features are noisy enough that classification leans on propagation:
    // per-node feature SNR is far below one, and only neighborhood averaging
    // over ~20 neighbors recovers the signal.
    AttackFixture fx(30, 16.0, 0.45, 0.03, 50, 150);
    SpadeScores s = fx.report.scores;
    AttackResult stripped = attack_delete(fx.data.graph, s, fx.data.graph.n_edges());
    AttackAssessment a = measure_attack(fx.data, fx.trained.model, stripped.modified_graph);

    int n_test = 0, majority = 0;
    std::vector<int> counts(2, 0);
    for (int i = 0; i < fx.data.n_nodes(); ++i) {
        if (fx.data.test_mask[i]) {
            ++n_test;
            ++counts[fx.data.labels[i]];
        }
    }
    majority = std::max(counts[0], counts[1]);
    const double prior = static_cast<double>(majority) / n_test;
    INFO("before=", a.accuracy_before, " after=", a.accuracy_after, " prior=", prior);
    CHECK(a.accuracy_before > prior + 0.1);  // the graph was carrying signal
    CHECK(a.accuracy_after <= prior + 0.2);  // near-prior once stripped
}

TEST_CASE("spade-guided deletion beats random deletion of equal budget") {
    double spade_acc = 0.0, random_acc = 0.0;
    const int n_seeds = 10;
    for (int seed = 0; seed < n_seeds; ++seed) {
        AttackFixture fx(100 + seed, 12.0, 0.45, 0.15, 40, 120);
        const Graph& g = fx.data.graph;
        const int budget = g.n_edges() / 5;

        AttackResult guided = attack_delete(g, fx.report.scores, budget);
        spade_acc +=
            measure_attack(fx.data, fx.trained.model, guided.modified_graph).accuracy_after;

        Rng rng(500 + seed);
        std::vector<int> ids(g.n_edges());
        for (int i = 0; i < g.n_edges(); ++i) ids[i] = i;
        rng.shuffle(ids);
        std::vector<Edge> kept;
        std::set<int> removed(ids.begin(), ids.begin() + budget);
        for (int i = 0; i < g.n_edges(); ++i) {
            if (!removed.count(i)) kept.push_back(g.edges()[i]);
        }
        Graph random_attacked(g.n_nodes(), kept);
        random_acc +=
            measure_attack(fx.data, fx.trained.model, random_attacked).accuracy_after;
    }
    spade_acc /= n_seeds;
    random_acc /= n_seeds;
    INFO("mean accuracy: spade-guided=", spade_acc, " random=", random_acc);
    CHECK(spade_acc < random_acc);
}

TEST_CASE("experiment with fraction 1 collapses Ours onto Full") {
    LabeledDataset data = two_cluster_dataset(15, 6, 0.6, 0.5, 0.08, 40);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 5;
    cfg.seed = 41;
    cfg.hidden_dim = 8;
    ExperimentOptions opts;
    opts.fraction = 1.0;
    opts.k = 6;
    opts.s = 6;
    ExperimentResult r = run_selection_experiment(data, cfg, 42, opts);
    REQUIRE(r.rows.size() == 15);  // 3 arms x 5 epochs
    for (int e = 0; e < 5; ++e) {
        const ExperimentRow& ours = r.rows[e];
        const ExperimentRow& full = r.rows[10 + e];
        CHECK(ours.arm == "Ours");
        CHECK(full.arm == "Full");
        CHECK(ours.accuracy == full.accuracy);  // identical training set and seed
    }
}

TEST_CASE("experiment produces the three-arm table and is deterministic") {
    LabeledDataset data = two_cluster_dataset(15, 6, 0.8, 0.5, 0.1, 50);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 3;
    cfg.seed = 51;
    cfg.hidden_dim = 8;
    ExperimentOptions opts;
    opts.fraction = 0.8;
    opts.k = 6;
    opts.s = 6;
    ExperimentResult a = run_selection_experiment(data, cfg, 52, opts);
    ExperimentResult b = run_selection_experiment(data, cfg, 52, opts);
    REQUIRE(a.rows.size() == 9);
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].arm == b.rows[i].arm);
        CHECK(a.rows[i].epoch == b.rows[i].epoch);
        CHECK(a.rows[i].accuracy == b.rows[i].accuracy);
    }
    CHECK(a.selection.selected == b.selection.selected);
    CHECK(a.selection.selected.size() == 20u);  // ceil(0.8 * 24)
}
