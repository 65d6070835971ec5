// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spade/graph.hpp"
#include "spade/hypergraph.hpp"
#include "spade/sparse.hpp"

namespace spade {

/// Edge-list TSV: `u<TAB>v<TAB>w\n` with 0-based ids; `#` starts a comment.
/// The node count is max id + 1 unless a larger n_nodes is forced.
Graph read_edge_tsv(const std::string& path, int n_nodes = -1);
void write_edge_tsv(const std::string& path, const Graph& g);

/// hMETIS format: header `|E| |V| [fmt]`, then one line of 1-based vertex ids
/// per hyperedge (ids converted to 0-based). fmt=1 adds a leading weight per
/// hyperedge line. Hyperedges with fewer than two distinct members are
/// skipped with a warning count.
Hypergraph read_hmetis(const std::string& path);
void write_hmetis(const std::string& path, const Hypergraph& h);

/// Dense matrix from CSV, one row per line, comma-separated.
DenseMatrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const DenseMatrix& m);

/// Partition file: one block id per line in node order.
std::vector<int> read_partition(const std::string& path);
void write_partition(const std::string& path, const std::vector<int>& assignment);

/// FNV-1a 64-bit content hash, for manifest drift detection.
uint64_t fnv1a(const void* data, size_t size);
uint64_t fnv1a_file(const std::string& path);

/// Shortest-round-trip-ish decimal formatting used by every CSV/TSV writer,
/// so reruns are byte-identical.
std::string format_double(double v);

}  // namespace spade
