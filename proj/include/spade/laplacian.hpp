// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spade/graph.hpp"
#include "spade/sparse.hpp"

namespace spade {

/// Weighted adjacency matrix of g (symmetric, zero diagonal).
SparseMatrix adjacency_matrix(const Graph& g);

/// Graph Laplacian: L[p][q] = -w(p,q) on edges, diagonal = weighted degree.
/// The diagonal is assembled as the negated sum of the off-diagonal row
/// entries in storage order, so row sums cancel exactly.
SparseMatrix build_laplacian(const Graph& g);

/// D^{-1/2} L D^{-1/2} with the convention 0^{-1/2} = 0, so isolated nodes
/// keep an all-zero row and column.
SparseMatrix normalize_laplacian(const SparseMatrix& laplacian);

}  // namespace spade
