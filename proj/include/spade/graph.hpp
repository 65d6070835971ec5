// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace spade {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

/// Weighted undirected graph. Edges are stored canonically: u < v, sorted
/// lexicographically, one entry per unordered pair. Construction merges
/// duplicate edges by summing weights and drops self-loops. Immutable after
/// construction, so instances can be shared across threads.
class Graph {
public:
    Graph() = default;
    Graph(int n_nodes, std::vector<Edge> edges);

    int n_nodes() const { return n_nodes_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const int> neighbors(int p) const;
    std::span<const double> neighbor_weights(int p) const;
    /// Indices into edges() for the edges incident to p, aligned with neighbors(p).
    std::span<const int> incident_edges(int p) const;

    /// Weighted degree.
    double degree(int p) const;

    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }
    /// Index into edges() of the unordered pair {u, v}, or -1.
    int edge_index(int u, int v) const;

    bool operator==(const Graph& other) const {
        return n_nodes_ == other.n_nodes_ && edge_keys_equal(other);
    }

private:
    void build_adjacency();
    bool edge_keys_equal(const Graph& other) const;

    int n_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> adj_offsets_;
    std::vector<int> adj_nodes_;
    std::vector<double> adj_weights_;
    std::vector<int> adj_edge_ids_;
};

/// Connected components over an edge set; returns a component id per node,
/// with ids assigned in order of each component's smallest node.
std::vector<int> connected_components(const Graph& g, int* n_components = nullptr);

}  // namespace spade
