// SPDX-License-Identifier: Apache-2.0
#include "spade/scores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spade/errors.hpp"
#include "spade/laplacian.hpp"

namespace spade {

WeightedEigenbasis build_weighted_basis(const EigenPairs& pairs) {
    const int s = static_cast<int>(pairs.eigenvalues.size());
    WeightedEigenbasis basis;
    basis.source_s = s;
    basis.matrix = pairs.eigenvectors;
    for (int i = 0; i < s; ++i) {
        double zeta = pairs.eigenvalues(i);
        if (zeta < -1e-10) {
            throw NumericalError("build_weighted_basis: eigenvalue " + std::to_string(i) +
                                 " is negative (" + std::to_string(zeta) + ")");
        }
        if (zeta < 0.0) zeta = 0.0;
        basis.matrix.col(i) *= std::sqrt(zeta);
    }
    return basis;
}

namespace {

void check_node(const WeightedEigenbasis& basis, int p) {
    if (p < 0 || p >= basis.matrix.rows()) {
        throw ParameterError("edge_score: node id " + std::to_string(p) + " out of range");
    }
}

}  // namespace

double edge_score(const WeightedEigenbasis& basis, int p, int q) {
    check_node(basis, p);
    check_node(basis, q);
    if (p == q) throw ParameterError("edge_score: endpoints must differ");
    return (basis.matrix.row(p) - basis.matrix.row(q)).squaredNorm();
}

double node_score(const WeightedEigenbasis& basis, const Graph& g_x, int p) {
    check_node(basis, p);
    auto nbrs = g_x.neighbors(p);
    if (nbrs.empty()) {
        warn("node_score: node " + std::to_string(p) + " is isolated; score 0");
        return 0.0;
    }
    double sum = 0.0;
    for (int q : nbrs) sum += edge_score(basis, p, q);
    return sum / static_cast<double>(nbrs.size());
}

double SpadeScores::edge_score_of(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{u, v});
    if (it == edges.end() || *it != std::pair{u, v}) {
        throw ParameterError("edge_score_of: edge (" + std::to_string(u) + "," +
                             std::to_string(v) + ") not scored");
    }
    return edge_scores[it - edges.begin()];
}

std::vector<int> rank_descending(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    return order;
}

ScoreReport score_graph_report(const Graph& g_x, const Graph& g_y,
                               const ScoreOptions& opts) {
    if (g_x.n_nodes() != g_y.n_nodes()) {
        throw ParameterError("score_graph: graphs must share a node set");
    }
    const SparseMatrix l_x = build_laplacian(g_x);
    const SparseMatrix l_y = build_laplacian(g_y);

    ScoreReport report;
    const bool dense = opts.solver == SolverChoice::kDense ||
                       (opts.solver == SolverChoice::kAuto && g_x.n_nodes() <= 2000);
    report.pairs = dense ? dense_generalized_eig(l_x, l_y, opts.s)
                         : iterative_generalized_eig(l_x, l_y, opts.s, opts.tol);
    report.basis = build_weighted_basis(report.pairs);

    SpadeScores& scores = report.scores;
    const int n = g_x.n_nodes();
    scores.edges.reserve(g_x.n_edges());
    scores.edge_scores.reserve(g_x.n_edges());
    for (const Edge& e : g_x.edges()) {
        scores.edges.emplace_back(e.u, e.v);
        scores.edge_scores.push_back(edge_score(report.basis, e.u, e.v));
    }
    scores.node_scores.resize(n);
    for (int p = 0; p < n; ++p) {
        auto incident = g_x.incident_edges(p);
        if (incident.empty()) {
            warn("node_score: node " + std::to_string(p) + " is isolated; score 0");
            scores.node_scores[p] = 0.0;
            continue;
        }
        double sum = 0.0;
        for (int e : incident) sum += scores.edge_scores[e];
        scores.node_scores[p] = sum / static_cast<double>(incident.size());
    }
    scores.ranking = rank_descending(scores.node_scores);
    return report;
}

SpadeScores score_graph(const Graph& g_x, const Graph& g_y, int s) {
    ScoreOptions opts;
    opts.s = s;
    return score_graph_report(g_x, g_y, opts).scores;
}

}  // namespace spade
