// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "spade/graph.hpp"
#include "spade/sparse.hpp"

namespace spade {

/// Vertex set plus hyperedge list. Each hyperedge is kept sorted and must
/// contain at least two distinct members. Weights are optional; absent means
/// unit weight for every hyperedge.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(int n_nodes, std::vector<std::vector<int>> hyperedges,
               std::vector<double> weights = {});

    int n_nodes() const { return n_nodes_; }
    int n_hyperedges() const { return static_cast<int>(hyperedges_.size()); }
    const std::vector<std::vector<int>>& hyperedges() const { return hyperedges_; }
    const std::vector<int>& hyperedge(int e) const { return hyperedges_[e]; }
    bool has_weights() const { return !weights_.empty(); }
    double weight(int e) const { return weights_.empty() ? 1.0 : weights_[e]; }

    /// Hyperedge ids incident to node v.
    std::span<const int> incident(int v) const;

    /// Sum of w(e) over hyperedges containing v.
    double degree(int v) const;

private:
    void build_incidence();

    int n_nodes_ = 0;
    std::vector<std::vector<int>> hyperedges_;
    std::vector<double> weights_;
    std::vector<int> inc_offsets_;
    std::vector<int> inc_edges_;
};

/// Each hyperedge e becomes a clique on its members with per-pair weight
/// w(e)/(|e|-1); parallel contributions accumulate.
Graph clique_expansion(const Hypergraph& h);

/// One auxiliary hub node per hyperedge (ids n..n+|E|-1), connected to each
/// member with weight w(e)/|e|.
Graph star_expansion(const Hypergraph& h);

/// Weighted adjacency matrix of the clique expansion.
SparseMatrix hypergraph_adjacency(const Hypergraph& h);

}  // namespace spade
