// SPDX-License-Identifier: Apache-2.0
#include "spade/hyperpart.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spade/errors.hpp"
#include "spade/knn.hpp"
#include "spade/laplacian.hpp"
#include "spade/rng.hpp"

namespace spade {

namespace {

// Plain symmetric Lanczos with full reorthogonalization for the adjacency
// operator; finds the extreme eigenvalues at both ends, which covers the
// largest-magnitude selection. Restarts with a fresh direction on breakdown
// so multiple eigenvalues are resolved.
void lanczos_extreme(const SparseMatrix& a, int want, double tol, Vector* values,
                     DenseMatrix* vectors) {
    const int n = static_cast<int>(a.rows());
    Rng rng(0xad75eed);
    std::vector<Vector> basis;
    std::vector<double> alphas, betas;

    auto orthogonalize = [&](Vector& w) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : basis) w -= q.dot(w) * q;
        }
    };
    auto fresh = [&]() -> Vector {
        for (int attempt = 0; attempt < 32; ++attempt) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.normal();
            orthogonalize(v);
            if (v.norm() > 1e-8) return v.normalized();
        }
        throw ConvergenceError("lanczos: could not draw a fresh direction");
    };

    const int hard_cap = std::min(n, std::max(6 * want + 40, 120));
    basis.push_back(fresh());
    while (true) {
        const int j = static_cast<int>(alphas.size());
        Vector w = a * basis[j];
        const double alpha = basis[j].dot(w);
        alphas.push_back(alpha);
        w -= alpha * basis[j];
        if (j > 0 && betas[j - 1] != 0.0) w -= betas[j - 1] * basis[j - 1];
        orthogonalize(w);
        const double beta = w.norm();
        const int dim = j + 1;
        const bool exhausted = dim >= n;
        if (!exhausted) {
            if (beta > 1e-10 * std::max(1.0, std::abs(alpha))) {
                betas.push_back(beta);
                basis.push_back(w / beta);
            } else {
                betas.push_back(0.0);
                basis.push_back(fresh());
            }
        }

        if (dim < std::min(n, 2 * want + 2) && !exhausted) continue;
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es;
        Vector diag = Eigen::Map<const Vector>(alphas.data(), dim);
        Vector sub = dim > 1 ? Eigen::Map<const Vector>(betas.data(), dim - 1) : Vector();
        es.computeFromTridiagonal(diag, sub);

        // Candidate Ritz pairs by |theta|, largest first.
        std::vector<int> order(dim);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            const double ax = std::abs(es.eigenvalues()(x));
            const double ay = std::abs(es.eigenvalues()(y));
            if (ax != ay) return ax > ay;
            return es.eigenvalues()(x) > es.eigenvalues()(y);
        });
        const double scale = std::max(1.0, std::abs(es.eigenvalues()(order[0])));
        bool converged = dim >= want;
        values->resize(want);
        vectors->resize(n, want);
        for (int i = 0; i < want && converged; ++i) {
            const int src = order[i];
            Vector v = Vector::Zero(n);
            for (int t = 0; t < dim; ++t) v += es.eigenvectors()(t, src) * basis[t];
            const double theta = es.eigenvalues()(src);
            if ((a * v - theta * v).norm() > tol * scale) converged = false;
            (*values)(i) = theta;
            vectors->col(i) = v.normalized();
        }
        if (converged) return;
        if (exhausted || dim >= hard_cap) {
            throw ConvergenceError("lanczos: adjacency eigensolve did not converge");
        }
    }
}

}  // namespace

PointSet hypergraph_spectral_embedding(const Hypergraph& h, int K, EigSelection selection) {
    const int n = h.n_nodes();
    if (K < 1 || K >= n) {
        throw ParameterError("hypergraph_spectral_embedding: K=" + std::to_string(K) +
                             " outside [1," + std::to_string(n) + ")");
    }
    const SparseMatrix a = hypergraph_adjacency(h);
    RowMatrix embedding(n, K);

    if (n <= 2000) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(to_dense(a));
        const Vector& lam = es.eigenvalues();  // ascending
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        if (selection == EigSelection::kLargestMagnitude) {
            std::sort(order.begin(), order.end(), [&](int x, int y) {
                const double ax = std::abs(lam(x)), ay = std::abs(lam(y));
                if (ax != ay) return ax > ay;
                return lam(x) > lam(y);
            });
        } else {
            const double zero_tol =
                n * std::numeric_limits<double>::epsilon() *
                std::max(1.0, lam.cwiseAbs().maxCoeff());
            order.erase(std::remove_if(order.begin(), order.end(),
                                       [&](int i) { return std::abs(lam(i)) <= zero_tol; }),
                        order.end());
            // already ascending
            if (static_cast<int>(order.size()) < K) {
                throw ParameterError(
                    "hypergraph_spectral_embedding: fewer than K nonzero eigenvalues");
            }
        }
        for (int i = 0; i < K; ++i) embedding.col(i) = es.eigenvectors().col(order[i]);
    } else {
        if (selection == EigSelection::kBottomNonzero) {
            throw ParameterError(
                "hypergraph_spectral_embedding: bottom-nonzero selection needs the dense "
                "path (n <= 2000)");
        }
        Vector values;
        DenseMatrix vectors;
        lanczos_extreme(a, K, 1e-8, &values, &vectors);
        for (int i = 0; i < K; ++i) embedding.col(i) = vectors.col(i);
    }
    return PointSet(std::move(embedding));
}

SpadeScores hypergraph_spade_scores(const Hypergraph& h, int K, int k, int s,
                                    EigSelection selection) {
    const int n = h.n_nodes();
    if (k < 1 || k >= n) {
        throw ParameterError("hypergraph_spade_scores: k outside [1,n)");
    }
    const Graph g_x = clique_expansion(h);
    const PointSet embedding = hypergraph_spectral_embedding(h, K, selection);
    Graph g_y = n <= 2000 ? knn_exact(embedding, k) : knn_approx(embedding, k);
    g_y = ensure_nullspace_containment(g_y, g_x, embedding);
    ScoreOptions opts;
    opts.s = s;
    return score_graph_report(g_x, g_y, opts).scores;
}

RobustSplit split_by_robustness(const SpadeScores& scores, double robust_fraction,
                                int n_blocks) {
    if (!(robust_fraction > 0.0) || robust_fraction >= 1.0) {
        throw ParameterError("split_by_robustness: robust fraction must lie in (0,1)");
    }
    const int n = scores.n_nodes();
    const int n_robust = static_cast<int>(std::floor(robust_fraction * n));
    if (n_robust < 2 * n_blocks) {
        throw ParameterError("split_by_robustness: robust set of " +
                             std::to_string(n_robust) + " nodes is below the 2*n_blocks=" +
                             std::to_string(2 * n_blocks) + " minimum");
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = scores.node_scores[a], sb = scores.node_scores[b];
        return sa != sb ? sa < sb : a < b;  // ascending: most robust first
    });
    RobustSplit split;
    split.scores = scores;
    split.robust.assign(order.begin(), order.begin() + n_robust);
    split.non_robust.assign(order.begin() + n_robust, order.end());
    std::sort(split.robust.begin(), split.robust.end());
    std::sort(split.non_robust.begin(), split.non_robust.end());
    return split;
}

SubHypergraph build_subhypergraph(const Hypergraph& h, const std::vector<int>& robust) {
    if (robust.empty()) throw ParameterError("build_subhypergraph: empty robust set");
    SubHypergraph out;
    out.old_to_new.assign(h.n_nodes(), -1);
    out.new_to_old = robust;
    std::sort(out.new_to_old.begin(), out.new_to_old.end());
    for (size_t i = 0; i < out.new_to_old.size(); ++i) {
        out.old_to_new[out.new_to_old[i]] = static_cast<int>(i);
    }
    std::vector<std::vector<int>> hyperedges;
    std::vector<double> weights;
    for (int e = 0; e < h.n_hyperedges(); ++e) {
        const auto& members = h.hyperedge(e);
        const bool contained = std::all_of(members.begin(), members.end(), [&](int v) {
            return out.old_to_new[v] >= 0;
        });
        if (!contained) continue;
        std::vector<int> mapped(members.size());
        for (size_t i = 0; i < members.size(); ++i) mapped[i] = out.old_to_new[members[i]];
        hyperedges.push_back(std::move(mapped));
        if (h.has_weights()) weights.push_back(h.weight(e));
    }
    if (hyperedges.empty()) {
        throw ParameterError(
            "build_subhypergraph: degenerate sub-hypergraph (no hyperedge is fully "
            "contained in the robust set)");
    }
    out.sub = Hypergraph(static_cast<int>(out.new_to_old.size()), std::move(hyperedges),
                         std::move(weights));
    return out;
}

std::vector<int> kmeans_rows(const DenseMatrix& rows, int n_clusters, uint64_t seed,
                             int max_iters) {
    const int n = static_cast<int>(rows.rows());
    Rng rng(seed);
    DenseMatrix centers(n_clusters, rows.cols());

    // k-means++ seeding
    centers.row(0) = rows.row(rng.uniform_int(n));
    Vector dist2 = (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < n_clusters; ++c) {
        const double total = dist2.sum();
        int pick;
        if (total <= 0.0) {
            pick = rng.uniform_int(n);
        } else {
            double r = rng.uniform() * total;
            pick = 0;
            for (; pick < n - 1 && r >= dist2(pick); ++pick) r -= dist2(pick);
        }
        centers.row(c) = rows.row(pick);
        dist2 = dist2.cwiseMin((rows.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (rows.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < n_clusters; ++c) {
                const double d = (rows.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::vector<int> counts(n_clusters, 0);
        DenseMatrix sums = DenseMatrix::Zero(n_clusters, rows.cols());
        for (int i = 0; i < n; ++i) {
            ++counts[assign[i]];
            sums.row(assign[i]) += rows.row(i);
        }
        for (int c = 0; c < n_clusters; ++c) {
            if (counts[c] == 0) return {};  // empty cluster: caller reseeds
            centers.row(c) = sums.row(c) / counts[c];
        }
        if (!changed && iter > 0) break;
    }
    return assign;
}

Partition partition_subhypergraph(const Hypergraph& s, int n_blocks, uint64_t seed) {
    const int n = s.n_nodes();
    if (n_blocks < 1) throw ParameterError("partition_subhypergraph: n_blocks must be >= 1");
    Partition part;
    part.n_blocks = n_blocks;
    if (n_blocks == 1) {
        part.assignment.assign(n, 0);
        return part;
    }
    if (n_blocks > n) {
        throw ParameterError("partition_subhypergraph: more blocks than nodes");
    }
    const PointSet embedding = hypergraph_spectral_embedding(s, std::min(n_blocks, n - 1));
    const DenseMatrix rows = embedding.coords();
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<int> assign = kmeans_rows(rows, n_blocks, seed + attempt * 0x9e3779b9ull);
        if (assign.empty()) continue;
        part.assignment = std::move(assign);
        return part;
    }
    throw ConvergenceError(
        "partition_subhypergraph: k-means produced an empty block in 10 seeded attempts");
}

Partition propagate_to_nonrobust(const Hypergraph& h, const RobustSplit& split,
                                 const Partition& sub_partition,
                                 const SubHypergraph& sub) {
    const int n = h.n_nodes();
    Partition out;
    out.n_blocks = sub_partition.n_blocks;
    out.assignment.assign(n, -1);
    std::vector<uint8_t> is_robust(n, 0);
    for (int r : split.robust) is_robust[r] = 1;
    for (int r : split.robust) {
        out.assignment[r] = sub_partition.assignment[sub.old_to_new[r]];
    }

    std::vector<int> block_sizes(out.n_blocks, 0);
    for (int r : split.robust) ++block_sizes[out.assignment[r]];
    const int largest_block = static_cast<int>(
        std::max_element(block_sizes.begin(), block_sizes.end()) - block_sizes.begin());

    std::vector<int> count(n, 0);  // co-occurrence counts, reset per node
    for (int u : split.non_robust) {
        std::vector<int> touched;
        for (int e : h.incident(u)) {
            for (int m : h.hyperedge(e)) {
                if (m != u && is_robust[m]) {
                    if (count[m] == 0) touched.push_back(m);
                    ++count[m];
                }
            }
        }
        if (touched.empty()) {
            out.assignment[u] = largest_block;
            continue;
        }
        int best = -1, best_count = 0;
        std::sort(touched.begin(), touched.end());
        for (int m : touched) {
            if (count[m] > best_count) {
                best_count = count[m];
                best = m;
            }
        }
        out.assignment[u] = out.assignment[best];
        for (int m : touched) count[m] = 0;
    }
    return out;
}

double local_conductance(const Hypergraph& h, const Partition& part) {
    const int n = h.n_nodes();
    if (static_cast<int>(part.assignment.size()) != n) {
        throw ParameterError("local_conductance: partition size mismatch");
    }
    std::vector<double> volume(part.n_blocks, 0.0);
    for (int v = 0; v < n; ++v) {
        const int b = part.assignment[v];
        if (b < 0 || b >= part.n_blocks) {
            throw ParameterError("local_conductance: block id out of range");
        }
        volume[b] += h.degree(v);
    }
    const double total = std::accumulate(volume.begin(), volume.end(), 0.0);

    std::vector<double> cut(part.n_blocks, 0.0);
    std::vector<int> seen;
    for (int e = 0; e < h.n_hyperedges(); ++e) {
        seen.clear();
        for (int m : h.hyperedge(e)) {
            const int b = part.assignment[m];
            if (std::find(seen.begin(), seen.end(), b) == seen.end()) seen.push_back(b);
        }
        if (seen.size() < 2) continue;  // not crossing
        for (int b : seen) cut[b] += h.weight(e);
    }

    double phi_sum = 0.0;
    int counted = 0;
    for (int b = 0; b < part.n_blocks; ++b) {
        const double denom = std::min(volume[b], total - volume[b]);
        if (denom <= 0.0) {
            warn("local_conductance: block " + std::to_string(b) +
                 " has zero min-volume; excluded from the average");
            continue;
        }
        phi_sum += cut[b] / denom;
        ++counted;
    }
    return counted > 0 ? phi_sum / counted : 0.0;
}

HyperPartResult partition_pipeline(const Hypergraph& h, const HyperPartOptions& opts) {
    const int n = h.n_nodes();
    HyperPartResult result;
    if (opts.robust_fraction >= 1.0) {
        // Degenerate split: every node is robust, the flow reduces to plain
        // spectral partitioning of the full hypergraph.
        result.split.robust.resize(n);
        std::iota(result.split.robust.begin(), result.split.robust.end(), 0);
        result.partition = partition_subhypergraph(h, opts.n_blocks, opts.seed);
        result.phi = local_conductance(h, result.partition);
        return result;
    }
    const int k = std::min(opts.k, n - 1);
    SpadeScores scores = hypergraph_spade_scores(h, opts.K, k, opts.s, opts.selection);
    result.split = split_by_robustness(scores, opts.robust_fraction, opts.n_blocks);
    SubHypergraph sub = build_subhypergraph(h, result.split.robust);
    Partition sub_partition = partition_subhypergraph(sub.sub, opts.n_blocks, opts.seed);
    result.partition = propagate_to_nonrobust(h, result.split, sub_partition, sub);
    result.phi = local_conductance(h, result.partition);
    return result;
}

}  // namespace spade
