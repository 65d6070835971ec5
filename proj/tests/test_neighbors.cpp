// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "spade/errors.hpp"
#include "spade/graph.hpp"
#include "spade/knn.hpp"
#include "spade/point_set.hpp"
#include "test_util.hpp"

using namespace spade;
using spade::testing::random_points_matrix;

namespace {

PointSet random_points(int n, int d, uint64_t seed) {
    Rng rng(seed);
    return PointSet(random_points_matrix(n, d, rng));
}

// O(n^2) reference path: scan all pairs, keep the k smallest by (distance,
// id), union-symmetrize. Written without nth_element so it shares no
// selection machinery with the implementation.
std::set<std::pair<int, int>> knn_oracle_edges(const PointSet& pts, int k) {
    const int n = pts.n_points();
    std::set<std::pair<int, int>> pairs;
    for (int p = 0; p < n; ++p) {
        std::vector<std::pair<double, int>> all;
        for (int q = 0; q < n; ++q) {
            if (q != p) all.push_back({pts.squared_distance(p, q), q});
        }
        std::sort(all.begin(), all.end());
        for (int i = 0; i < k; ++i) {
            pairs.emplace(std::min(p, all[i].second), std::max(p, all[i].second));
        }
    }
    return pairs;
}

std::set<std::pair<int, int>> edge_set(const Graph& g) {
    std::set<std::pair<int, int>> s;
    for (const Edge& e : g.edges()) s.emplace(e.u, e.v);
    return s;
}

double recall(const std::set<std::pair<int, int>>& got,
              const std::set<std::pair<int, int>>& truth) {
    int hit = 0;
    for (const auto& e : truth) hit += got.count(e);
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

}  // namespace

TEST_CASE("knn_exact on three collinear points") {
    RowMatrix coords(3, 1);
    coords << 0.0, 1.0, 3.0;
    Graph g = knn_exact(PointSet(coords), 1);
    CHECK(edge_set(g) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
    for (const Edge& e : g.edges()) CHECK(e.w == 1.0);
}

TEST_CASE("knn_exact with k = n-1 is the complete graph") {
    PointSet pts = random_points(12, 3, 1);
    Graph g = knn_exact(pts, 11);
    CHECK(g.n_edges() == 12 * 11 / 2);
}

TEST_CASE("knn_exact equals the exhaustive oracle on 500 random points") {
    PointSet pts = random_points(500, 10, 2);
    Graph g = knn_exact(pts, 20);
    CHECK(edge_set(g) == knn_oracle_edges(pts, 20));
}

TEST_CASE("knn parameter validation") {
    PointSet pts = random_points(10, 2, 3);
    CHECK_THROWS_AS(knn_exact(pts, 0), ParameterError);
    CHECK_THROWS_AS(knn_exact(pts, 10), ParameterError);
    CHECK_THROWS_AS(knn_approx(pts, 3, 0.0), ParameterError);
    CHECK_THROWS_AS(knn_approx(pts, 3, 1.5), ParameterError);
}

TEST_CASE("knn_exact is deterministic") {
    PointSet pts = random_points(120, 4, 4);
    Graph a = knn_exact(pts, 7);
    Graph b = knn_exact(pts, 7);
    CHECK(a == b);
}

TEST_CASE("each node keeps its own k out-neighbors after symmetrization") {
    PointSet pts = random_points(80, 5, 5);
    const int k = 6;
    Graph g = knn_exact(pts, k);
    for (int p = 0; p < pts.n_points(); ++p) {
        std::vector<std::pair<double, int>> all;
        for (int q = 0; q < pts.n_points(); ++q) {
            if (q != p) all.push_back({pts.squared_distance(p, q), q});
        }
        std::sort(all.begin(), all.end());
        for (int i = 0; i < k; ++i) CHECK(g.has_edge(p, all[i].second));
        CHECK(static_cast<int>(g.neighbors(p).size()) >= k);
    }
}

TEST_CASE("permuting point order relabels the exact knn graph isomorphically") {
    PointSet pts = random_points(60, 3, 6);  // uniform draws: distances distinct
    const int k = 5;
    Graph base = knn_exact(pts, k);

    Rng rng(99);
    std::vector<int> perm(60);
    for (int i = 0; i < 60; ++i) perm[i] = i;
    rng.shuffle(perm);  // perm[i] = new id of old node i
    RowMatrix permuted(60, 3);
    for (int i = 0; i < 60; ++i) permuted.row(perm[i]) = pts.point(i);
    Graph relabeled = knn_exact(PointSet(permuted), k);

    std::set<std::pair<int, int>> expected;
    for (const Edge& e : base.edges()) {
        expected.emplace(std::min(perm[e.u], perm[e.v]), std::max(perm[e.u], perm[e.v]));
    }
    CHECK(edge_set(relabeled) == expected);
}

TEST_CASE("knn_approx below the fallback threshold equals knn_exact") {
    PointSet pts = random_points(50, 8, 7);
    for (double quality : {0.1, 0.5, 1.0}) {
        CHECK(knn_approx(pts, 4, quality) == knn_exact(pts, 4));
    }
}

TEST_CASE("knn_approx recall at default quality on 5000 points") {
    PointSet pts = random_points(5000, 10, 8);
    Graph approx = knn_approx(pts, 20);
    Graph exact = knn_exact(pts, 20);
    const double r = recall(edge_set(approx), edge_set(exact));
    INFO("recall = ", r);
    CHECK(r >= 0.90);
}

TEST_CASE("knn_approx recall at quality 1.0 on 1000 points") {
    PointSet pts = random_points(1000, 10, 9);
    Graph approx = knn_approx(pts, 10, 1.0);
    Graph exact = knn_exact(pts, 10);
    const double r = recall(edge_set(approx), edge_set(exact));
    INFO("recall = ", r);
    CHECK(r >= 0.99);
}

TEST_CASE("knn_approx is deterministic") {
    PointSet pts = random_points(600, 6, 10);
    CHECK(knn_approx(pts, 8) == knn_approx(pts, 8));
}

TEST_CASE("containment repair links components sharing a g_x component") {
    // Two clusters in g_y, connected g_x: the repair must bridge them.
    RowMatrix coords(6, 2);
    coords << 0, 0, 0, 1, 1, 0, 10, 10, 10, 11, 11, 10;
    PointSet pts(coords);
    Graph g_y(6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
    Graph g_x_connected(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}});

    Graph repaired = ensure_nullspace_containment(g_y, g_x_connected, pts);
    int n_comp = 0;
    connected_components(repaired, &n_comp);
    CHECK(n_comp == 1);
    CHECK(repaired.n_edges() == g_y.n_edges() + 1);
    double min_w = 1e9;
    for (const Edge& e : repaired.edges()) min_w = std::min(min_w, e.w);
    CHECK(min_w == doctest::Approx(1e-3));

    // If g_x splits the same way, no repair is needed.
    Graph g_x_split(6, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1}});
    Graph untouched = ensure_nullspace_containment(g_y, g_x_split, pts);
    CHECK(untouched == g_y);
}
