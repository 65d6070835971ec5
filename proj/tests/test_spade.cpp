// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "spade/errors.hpp"
#include "spade/graph.hpp"
#include "spade/knn.hpp"
#include "spade/laplacian.hpp"
#include "spade/point_set.hpp"
#include "spade/scores.hpp"
#include "test_util.hpp"

using namespace spade;
using spade::testing::random_connected_graph;
using spade::testing::random_points_matrix;

namespace {

EigenPairs make_pairs(const Vector& eigenvalues, const DenseMatrix& vectors) {
    EigenPairs p;
    p.eigenvalues = eigenvalues;
    p.eigenvectors = vectors;
    return p;
}

DenseMatrix random_orthonormal(int n, int s, Rng& rng) {
    DenseMatrix m(n, s);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < s; ++j) m(i, j) = rng.normal();
    }
    // Gram-Schmidt
    for (int j = 0; j < s; ++j) {
        for (int i = 0; i < j; ++i) m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
        m.col(j).normalize();
    }
    return m;
}

}  // namespace

TEST_CASE("weighted basis with unit eigenvalues is the raw eigenvectors") {
    Rng rng(1);
    DenseMatrix vecs = random_orthonormal(12, 4, rng);
    EigenPairs pairs = make_pairs(Vector::Ones(4), vecs);
    WeightedEigenbasis basis = build_weighted_basis(pairs);
    CHECK((basis.matrix - vecs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted basis column norm is sqrt(eigenvalue)") {
    Rng rng(2);
    DenseMatrix vecs = random_orthonormal(10, 1, rng);
    Vector vals(1);
    vals << 4.0;
    WeightedEigenbasis basis = build_weighted_basis(make_pairs(vals, vecs));
    CHECK(basis.matrix.col(0).norm() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("weighted basis column norms match sqrt(zeta) on random pairs") {
    Rng rng(3);
    DenseMatrix vecs = random_orthonormal(20, 6, rng);
    Vector vals(6);
    for (int i = 0; i < 6; ++i) vals(i) = rng.uniform(0.0, 5.0);
    std::sort(vals.data(), vals.data() + 6, std::greater<>());
    WeightedEigenbasis basis = build_weighted_basis(make_pairs(vals, vecs));
    for (int i = 0; i < 6; ++i) {
        CHECK(basis.matrix.col(i).norm() ==
              doctest::Approx(std::sqrt(vals(i))).epsilon(1e-8));
    }
}

TEST_CASE("weighted basis clamps tiny negatives and rejects real ones") {
    Rng rng(4);
    DenseMatrix vecs = random_orthonormal(8, 2, rng);
    Vector tiny(2);
    tiny << 1.0, -5e-11;
    WeightedEigenbasis basis = build_weighted_basis(make_pairs(tiny, vecs));
    CHECK(basis.matrix.col(1).norm() == 0.0);

    Vector bad(2);
    bad << 1.0, -1e-6;
    CHECK_THROWS_AS(build_weighted_basis(make_pairs(bad, vecs)), NumericalError);
}

TEST_CASE("edge score of a 1-column basis is the squared row difference") {
    WeightedEigenbasis basis;
    basis.source_s = 1;
    basis.matrix = DenseMatrix(2, 1);
    basis.matrix << 3.0, 1.0;
    CHECK(edge_score(basis, 0, 1) == doctest::Approx(4.0));
    CHECK(edge_score(basis, 1, 0) == doctest::Approx(4.0));
}

TEST_CASE("edge score of identical rows is zero") {
    WeightedEigenbasis basis;
    basis.source_s = 3;
    basis.matrix = DenseMatrix::Ones(4, 3);
    CHECK(edge_score(basis, 1, 2) == 0.0);
    CHECK_THROWS_AS(edge_score(basis, 0, 0), ParameterError);
    CHECK_THROWS_AS(edge_score(basis, 0, 9), ParameterError);
}

TEST_CASE("edge score equals the indicator-vector evaluation") {
    Rng rng(5);
    WeightedEigenbasis basis;
    basis.source_s = 7;
    basis.matrix = DenseMatrix(30, 7);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 7; ++j) basis.matrix(i, j) = rng.normal();
    }
    for (int t = 0; t < 100; ++t) {
        int p = rng.uniform_int(30), q = rng.uniform_int(30);
        if (p == q) continue;
        Vector indicator = Vector::Zero(30);
        indicator(p) = 1.0;
        indicator(q) = -1.0;
        const double expect = (basis.matrix.transpose() * indicator).squaredNorm();
        CHECK(edge_score(basis, p, q) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("node score averages edge scores over neighbors") {
    Rng rng(6);
    WeightedEigenbasis basis;
    basis.source_s = 4;
    basis.matrix = DenseMatrix(15, 4);
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 4; ++j) basis.matrix(i, j) = rng.normal();
    }
    Graph g = random_connected_graph(15, 10, rng);
    for (int p = 0; p < 15; ++p) {
        double sum = 0.0;
        for (int q : g.neighbors(p)) sum += edge_score(basis, p, q);
        const double expect = sum / static_cast<double>(g.neighbors(p).size());
        CHECK(node_score(basis, g, p) == doctest::Approx(expect).epsilon(1e-12));
    }

    // single neighbor: node score equals that edge score
    Graph pair(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(node_score(basis, pair, 0) == doctest::Approx(edge_score(basis, 0, 1)));

    // identical rows: all zero scores
    WeightedEigenbasis flat;
    flat.source_s = 4;
    flat.matrix = DenseMatrix::Ones(15, 4);
    for (int p = 0; p < 15; ++p) CHECK(node_score(flat, g, p) == 0.0);
}

TEST_CASE("isolated node gets score zero") {
    WeightedEigenbasis basis;
    basis.source_s = 2;
    basis.matrix = DenseMatrix::Random(4, 2);
    Graph g(4, {{0, 1, 1.0}});  // nodes 2, 3 isolated
    CHECK(node_score(basis, g, 2) == 0.0);
}

TEST_CASE("score_graph on identical connected graphs: projector case") {
    Rng rng(7);
    Graph g = random_connected_graph(25, 30, rng);
    ScoreOptions opts;
    opts.s = 8;
    ScoreReport report = score_graph_report(g, g, opts);
    for (int i = 0; i < 8; ++i) {
        CHECK(report.pairs.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // ranking is a permutation of [0, n)
    std::vector<int> sorted = report.scores.ranking;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 25; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("cross-cluster edges in G_X dominate the ranking") {
    // Two 15-node clusters; g_y has only intra-cluster structure (plus one
    // weak bridge for connectivity); g_x adds 3 cross-cluster edges.
    const int half = 15, n = 2 * half;
    Rng rng(8);
    std::vector<Edge> intra;
    for (int c = 0; c < 2; ++c) {
        const int base = c * half;
        for (int u = 0; u < half; ++u) {
            for (int v = u + 1; v < half; ++v) {
                if (rng.uniform() < 0.6) intra.push_back({base + u, base + v, 1.0});
            }
        }
    }
    intra.push_back({0, half, 1.0});
    Graph gy(n, intra);
    int comp = 0;
    connected_components(gy, &comp);
    REQUIRE(comp == 1);

    auto cross = intra;
    cross.push_back({2, half + 3, 1.0});
    cross.push_back({5, half + 8, 1.0});
    cross.push_back({9, half + 12, 1.0});
    Graph gx(n, cross);

    SpadeScores scores = score_graph(gx, gy, 6);
    std::set<int> endpoints{2, half + 3, 5, half + 8, 9, half + 12};
    // All six cross-edge endpoints must rank in the top eight.
    std::set<int> top(scores.ranking.begin(), scores.ranking.begin() + 8);
    int hits = 0;
    for (int p : endpoints) hits += top.count(p);
    CHECK(hits >= 6);
}

TEST_CASE("score_graph is permutation-equivariant") {
    Rng rng(9);
    Graph gx = random_connected_graph(20, 25, rng);
    Graph gy = random_connected_graph(20, 25, rng);
    SpadeScores base = score_graph(gx, gy, 5);

    std::vector<int> perm(20);
    for (int i = 0; i < 20; ++i) perm[i] = i;
    rng.shuffle(perm);
    auto permute = [&](const Graph& g) {
        std::vector<Edge> edges;
        for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
        return Graph(20, edges);
    };
    SpadeScores permuted = score_graph(permute(gx), permute(gy), 5);
    for (int p = 0; p < 20; ++p) {
        CHECK(permuted.node_scores[perm[p]] ==
              doctest::Approx(base.node_scores[p]).epsilon(1e-8));
    }
}

TEST_CASE("score invariants: symmetry, non-negativity, consistency") {
    Rng rng(10);
    Graph gx = random_connected_graph(30, 50, rng);
    Graph gy = random_connected_graph(30, 50, rng);
    ScoreOptions opts;
    opts.s = 6;
    ScoreReport report = score_graph_report(gx, gy, opts);
    const SpadeScores& s = report.scores;

    for (const auto& [u, v] : s.edges) {
        CHECK(edge_score(report.basis, u, v) == edge_score(report.basis, v, u));
    }
    for (double sc : s.edge_scores) CHECK(sc >= 0.0);
    for (double sc : s.node_scores) CHECK(sc >= 0.0);

    // node scores recomputed from edge scores match to 1e-12
    for (int p = 0; p < 30; ++p) {
        double sum = 0.0;
        int count = 0;
        for (size_t i = 0; i < s.edges.size(); ++i) {
            if (s.edges[i].first == p || s.edges[i].second == p) {
                sum += s.edge_scores[i];
                ++count;
            }
        }
        CHECK(s.node_scores[p] ==
              doctest::Approx(sum / std::max(1, count)).epsilon(1e-12));
    }
}

TEST_CASE("feature scaling leaves the kNN edge set and score ranking unchanged") {
    Rng rng(12);
    RowMatrix features = random_points_matrix(40, 6, rng);
    RowMatrix embedding = random_points_matrix(40, 6, rng);
    Graph gx = knn_exact(PointSet(features), 5);

    Graph gy1 = knn_exact(PointSet(embedding), 5);
    RowMatrix scaled = 7.5 * embedding;
    Graph gy2 = knn_exact(PointSet(scaled), 5);
    REQUIRE(gy1 == gy2);  // scaling cannot change nearest-neighbor order

    gy1 = ensure_nullspace_containment(gy1, gx, PointSet(embedding));
    gy2 = ensure_nullspace_containment(gy2, gx, PointSet(scaled));
    SpadeScores s1 = score_graph(gx, gy1, 5);
    SpadeScores s2 = score_graph(gx, gy2, 5);
    CHECK(s1.ranking == s2.ranking);
}

TEST_CASE("edge_score_of lookup") {
    Rng rng(13);
    Graph gx = random_connected_graph(12, 10, rng);
    Graph gy = random_connected_graph(12, 10, rng);
    SpadeScores s = score_graph(gx, gy, 3);
    const Edge& e = gx.edges()[2];
    CHECK(s.edge_score_of(e.v, e.u) == s.edge_scores[2]);
    CHECK_THROWS_AS(s.edge_score_of(0, 0), ParameterError);
}
