// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "spade/hypergraph.hpp"
#include "spade/point_set.hpp"
#include "spade/scores.hpp"

namespace spade {

struct Partition {
    std::vector<int> assignment;  // block id per node
    int n_blocks = 0;
};

struct RobustSplit {
    std::vector<int> robust;      // ascending ids
    std::vector<int> non_robust;  // ascending ids
    SpadeScores scores;
};

/// Which adjacency eigenvectors span the embedding space.
enum class EigSelection {
    kLargestMagnitude,  // largest |eigenvalue|
    kBottomNonzero,     // algebraically smallest nonzero eigenvalues
};

/// Rows of the n x K eigenvector matrix of the clique-expansion adjacency.
/// The bottom-nonzero selection requires the dense path (n <= 2000).
PointSet hypergraph_spectral_embedding(const Hypergraph& h, int K,
                                       EigSelection selection = EigSelection::kLargestMagnitude);

/// Spade scores of a hypergraph: L_X from the clique expansion, L_Y from the
/// kNN graph over the spectral embedding.
SpadeScores hypergraph_spade_scores(const Hypergraph& h, int K, int k, int s,
                                    EigSelection selection = EigSelection::kLargestMagnitude);

/// Bottom robust_fraction of nodes by ascending score become the robust set
/// (floor sizing); the robust set must hold at least 2 * n_blocks nodes.
RobustSplit split_by_robustness(const SpadeScores& scores, double robust_fraction,
                                int n_blocks);

struct SubHypergraph {
    Hypergraph sub;
    std::vector<int> old_to_new;  // -1 for nodes outside the robust set
    std::vector<int> new_to_old;
};

/// Keeps hyperedges fully contained in the robust set, densely re-indexed.
SubHypergraph build_subhypergraph(const Hypergraph& h, const std::vector<int>& robust);

/// Spectral embedding with K = n_blocks followed by seeded k-means++.
/// Retries with derived seeds when a block comes back empty (up to 10x).
Partition partition_subhypergraph(const Hypergraph& s, int n_blocks, uint64_t seed);

/// Assigns each non-robust node to the block of the robust node it shares
/// the most hyperedges with (ties: higher count, then lower robust id);
/// zero co-occurrence falls back to the largest block.
Partition propagate_to_nonrobust(const Hypergraph& h, const RobustSplit& split,
                                 const Partition& sub_partition,
                                 const SubHypergraph& sub);

/// Average over blocks of (crossing hyperedge weight) / min(vol(S), vol(V\S)).
/// Zero-volume blocks are excluded with a warning; with no valid block the
/// result is 0.
double local_conductance(const Hypergraph& h, const Partition& part);

struct HyperPartOptions {
    int n_blocks = 2;
    double robust_fraction = 0.5;  // >= 1 means every node is robust
    int K = 2;
    int k = 10;
    int s = 10;
    uint64_t seed = 0;
    EigSelection selection = EigSelection::kLargestMagnitude;
};

struct HyperPartResult {
    Partition partition;
    double phi = 0.0;
    RobustSplit split;
};

/// The full robust-node partitioning flow: embed, score, split, partition
/// the robust sub-hypergraph, propagate, evaluate conductance.
HyperPartResult partition_pipeline(const Hypergraph& h, const HyperPartOptions& opts);

/// Seeded k-means++ over matrix rows; returns cluster ids, or an empty
/// vector when some cluster ends up empty.
std::vector<int> kmeans_rows(const DenseMatrix& rows, int n_clusters, uint64_t seed,
                             int max_iters = 100);

}  // namespace spade
