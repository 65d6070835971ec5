// SPDX-License-Identifier: Apache-2.0
#include "spade/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spade/errors.hpp"
#include "spade/laplacian.hpp"

namespace spade {

Hypergraph::Hypergraph(int n_nodes, std::vector<std::vector<int>> hyperedges,
                       std::vector<double> weights)
    : n_nodes_(n_nodes), hyperedges_(std::move(hyperedges)), weights_(std::move(weights)) {
    if (n_nodes < 0) throw ParameterError("Hypergraph: negative node count");
    if (!weights_.empty() && weights_.size() != hyperedges_.size()) {
        throw ParameterError("Hypergraph: weight count " + std::to_string(weights_.size()) +
                             " does not match hyperedge count " +
                             std::to_string(hyperedges_.size()));
    }
    for (size_t e = 0; e < hyperedges_.size(); ++e) {
        auto& members = hyperedges_[e];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() < 2) {
            throw ParameterError("Hypergraph: hyperedge " + std::to_string(e) +
                                 " has fewer than 2 distinct members");
        }
        if (members.front() < 0 || members.back() >= n_nodes_) {
            throw ParameterError("Hypergraph: hyperedge " + std::to_string(e) +
                                 " has a member outside [0," + std::to_string(n_nodes_) + ")");
        }
        if (!weights_.empty() && (!(weights_[e] > 0.0) || !std::isfinite(weights_[e]))) {
            throw ParameterError("Hypergraph: hyperedge " + std::to_string(e) +
                                 " has non-positive weight");
        }
    }
    build_incidence();
}

void Hypergraph::build_incidence() {
    inc_offsets_.assign(n_nodes_ + 1, 0);
    for (const auto& members : hyperedges_) {
        for (int v : members) ++inc_offsets_[v + 1];
    }
    std::partial_sum(inc_offsets_.begin(), inc_offsets_.end(), inc_offsets_.begin());
    inc_edges_.resize(inc_offsets_.back());
    std::vector<int> cursor(inc_offsets_.begin(), inc_offsets_.end() - 1);
    for (int e = 0; e < n_hyperedges(); ++e) {
        for (int v : hyperedges_[e]) inc_edges_[cursor[v]++] = e;
    }
}

std::span<const int> Hypergraph::incident(int v) const {
    return {inc_edges_.data() + inc_offsets_[v],
            static_cast<size_t>(inc_offsets_[v + 1] - inc_offsets_[v])};
}

double Hypergraph::degree(int v) const {
    double d = 0.0;
    for (int e : incident(v)) d += weight(e);
    return d;
}

Graph clique_expansion(const Hypergraph& h) {
    std::vector<Edge> edges;
    for (int e = 0; e < h.n_hyperedges(); ++e) {
        const auto& members = h.hyperedge(e);
        const double w = h.weight(e) / static_cast<double>(members.size() - 1);
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t j = i + 1; j < members.size(); ++j) {
                edges.push_back({members[i], members[j], w});
            }
        }
    }
    return Graph(h.n_nodes(), std::move(edges));
}

Graph star_expansion(const Hypergraph& h) {
    std::vector<Edge> edges;
    for (int e = 0; e < h.n_hyperedges(); ++e) {
        const auto& members = h.hyperedge(e);
        const int hub = h.n_nodes() + e;
        const double w = h.weight(e) / static_cast<double>(members.size());
        for (int v : members) edges.push_back({v, hub, w});
    }
    return Graph(h.n_nodes() + h.n_hyperedges(), std::move(edges));
}

SparseMatrix hypergraph_adjacency(const Hypergraph& h) {
    return adjacency_matrix(clique_expansion(h));
}

}  // namespace spade
