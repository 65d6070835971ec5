// SPDX-License-Identifier: Apache-2.0
#include "spade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spade/errors.hpp"

namespace spade {

Graph::Graph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
    if (n_nodes < 0) throw ParameterError("Graph: negative node count");
    for (Edge& e : edges) {
        if (e.u < 0 || e.u >= n_nodes || e.v < 0 || e.v >= n_nodes) {
            throw ParameterError("Graph: edge (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + ") outside [0," +
                                 std::to_string(n_nodes) + ")");
        }
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw ParameterError("Graph: edge (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + ") has non-positive weight");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    // Self-loops carry no information for an undirected Laplacian; drop them.
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
            edges_.back().w += e.w;  // duplicates merge by weight summation
        } else {
            edges_.push_back(e);
        }
    }
    build_adjacency();
}

void Graph::build_adjacency() {
    adj_offsets_.assign(n_nodes_ + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_offsets_[e.u + 1];
        ++adj_offsets_[e.v + 1];
    }
    std::partial_sum(adj_offsets_.begin(), adj_offsets_.end(), adj_offsets_.begin());
    adj_nodes_.resize(adj_offsets_.back());
    adj_weights_.resize(adj_offsets_.back());
    adj_edge_ids_.resize(adj_offsets_.back());
    std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        const Edge& e = edges_[i];
        adj_nodes_[cursor[e.u]] = e.v;
        adj_weights_[cursor[e.u]] = e.w;
        adj_edge_ids_[cursor[e.u]++] = i;
        adj_nodes_[cursor[e.v]] = e.u;
        adj_weights_[cursor[e.v]] = e.w;
        adj_edge_ids_[cursor[e.v]++] = i;
    }
    // Edges are sorted by (u, v), so per-node neighbor lists come out sorted
    // for v-side entries but interleaved for u-side ones; sort each bucket.
    for (int p = 0; p < n_nodes_; ++p) {
        const int lo = adj_offsets_[p], hi = adj_offsets_[p + 1];
        std::vector<int> order(hi - lo);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return adj_nodes_[lo + a] < adj_nodes_[lo + b];
        });
        std::vector<int> nodes(hi - lo);
        std::vector<double> weights(hi - lo);
        std::vector<int> ids(hi - lo);
        for (int i = 0; i < hi - lo; ++i) {
            nodes[i] = adj_nodes_[lo + order[i]];
            weights[i] = adj_weights_[lo + order[i]];
            ids[i] = adj_edge_ids_[lo + order[i]];
        }
        std::copy(nodes.begin(), nodes.end(), adj_nodes_.begin() + lo);
        std::copy(weights.begin(), weights.end(), adj_weights_.begin() + lo);
        std::copy(ids.begin(), ids.end(), adj_edge_ids_.begin() + lo);
    }
}

std::span<const int> Graph::neighbors(int p) const {
    return {adj_nodes_.data() + adj_offsets_[p],
            static_cast<size_t>(adj_offsets_[p + 1] - adj_offsets_[p])};
}

std::span<const double> Graph::neighbor_weights(int p) const {
    return {adj_weights_.data() + adj_offsets_[p],
            static_cast<size_t>(adj_offsets_[p + 1] - adj_offsets_[p])};
}

std::span<const int> Graph::incident_edges(int p) const {
    return {adj_edge_ids_.data() + adj_offsets_[p],
            static_cast<size_t>(adj_offsets_[p + 1] - adj_offsets_[p])};
}

double Graph::degree(int p) const {
    double d = 0.0;
    for (double w : neighbor_weights(p)) d += w;
    return d;
}

int Graph::edge_index(int u, int v) const {
    if (u == v) return -1;
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_nodes_) return -1;
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v},
                               [](const Edge& e, const std::pair<int, int>& key) {
                                   return e.u != key.first ? e.u < key.first
                                                           : e.v < key.second;
                               });
    if (it != edges_.end() && it->u == u && it->v == v) {
        return static_cast<int>(it - edges_.begin());
    }
    return -1;
}

bool Graph::edge_keys_equal(const Graph& other) const {
    if (edges_.size() != other.edges_.size()) return false;
    for (size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].u != other.edges_[i].u || edges_[i].v != other.edges_[i].v ||
            edges_[i].w != other.edges_[i].w) {
            return false;
        }
    }
    return true;
}

std::vector<int> connected_components(const Graph& g, int* n_components) {
    std::vector<int> comp(g.n_nodes(), -1);
    std::vector<int> stack;
    int next = 0;
    for (int start = 0; start < g.n_nodes(); ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            for (int q : g.neighbors(p)) {
                if (comp[q] < 0) {
                    comp[q] = next;
                    stack.push_back(q);
                }
            }
        }
        ++next;
    }
    if (n_components) *n_components = next;
    return comp;
}

}  // namespace spade
