// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "spade/eig.hpp"
#include "spade/graph.hpp"

namespace spade {

/// The weighted eigensubspace matrix: column i holds v_i * sqrt(zeta_i).
/// Row p is node p's spectral embedding; all Spade scores are squared
/// distances between rows.
struct WeightedEigenbasis {
    DenseMatrix matrix;  // n x s
    int source_s = 0;
};

/// Column-wise sqrt(eigenvalue) scaling. Eigenvalues within -1e-10 of zero
/// are clamped to zero; anything more negative is a numerical error.
WeightedEigenbasis build_weighted_basis(const EigenPairs& pairs);

/// Spade(p,q) = squared distance between rows p and q of the basis.
double edge_score(const WeightedEigenbasis& basis, int p, int q);

/// Spade(p) = mean edge score over p's neighbors in g_x. Isolated nodes get
/// score 0 with a warning.
double node_score(const WeightedEigenbasis& basis, const Graph& g_x, int p);

/// Per-node and per-edge robustness scores plus the descending ranking
/// (ties broken by ascending node id). Edge entries follow g_x's canonical
/// edge order.
struct SpadeScores {
    std::vector<double> node_scores;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> edge_scores;
    std::vector<int> ranking;

    int n_nodes() const { return static_cast<int>(node_scores.size()); }
    /// Score of the unordered pair {u, v}; throws ParameterError if absent.
    double edge_score_of(int u, int v) const;
};

enum class SolverChoice {
    kAuto,      // dense up to 2000 nodes, iterative beyond
    kDense,
    kIterative,
};

struct ScoreOptions {
    int s = 10;
    double tol = 1e-6;
    SolverChoice solver = SolverChoice::kAuto;
};

struct ScoreReport {
    SpadeScores scores;
    EigenPairs pairs;
    WeightedEigenbasis basis;
};

/// Full scoring pipeline: Laplacians of g_x and g_y, top-s eigenpairs of
/// L_Y^+ L_X, weighted basis, then every node and edge score over E_X.
ScoreReport score_graph_report(const Graph& g_x, const Graph& g_y,
                               const ScoreOptions& opts = {});

SpadeScores score_graph(const Graph& g_x, const Graph& g_y, int s = 10);

/// Descending-score order with ascending-id tie break.
std::vector<int> rank_descending(const std::vector<double>& scores);

}  // namespace spade
