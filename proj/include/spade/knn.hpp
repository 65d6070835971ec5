// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spade/graph.hpp"
#include "spade/point_set.hpp"

namespace spade {

inline constexpr double kDefaultKnnQuality = 0.5;

/// Fewer points than this and knn_approx answers exactly by brute force,
/// keeping small instances deterministic regardless of quality.
inline constexpr int kKnnExactFallback = 256;

/// Exact k-nearest-neighbor graph under Euclidean distance. Directed
/// neighbor lists are symmetrized by union; every edge gets weight 1.
/// Distance ties break toward the lower node id.
Graph knn_exact(const PointSet& pts, int k);

/// Approximate k-NN graph via a hierarchical navigable-small-world index.
/// quality in (0,1] trades construction/search effort for recall; the
/// default reaches >= 0.9 recall against knn_exact on uniform data.
/// Falls back to the exact path below kKnnExactFallback points.
Graph knn_approx(const PointSet& pts, int k, double quality = kDefaultKnnQuality);

/// Repairs null(L_Y) ⊆ null(L_X): whenever components of g_y span a single
/// g_x component they are linked with weight `link_weight` edges chosen by
/// nearest component centroids in `pts`. Returns g_y unchanged when the
/// containment already holds. Warns when links are added.
Graph ensure_nullspace_containment(const Graph& g_y, const Graph& g_x,
                                   const PointSet& pts, double link_weight = 1e-3);

}  // namespace spade
