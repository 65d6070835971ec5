// SPDX-License-Identifier: Apache-2.0
#include "spade/laplacian.hpp"

#include <cmath>
#include <vector>

namespace spade {

SparseMatrix adjacency_matrix(const Graph& g) {
    const int n = g.n_nodes();
    SparseMatrix a(n, n);
    std::vector<int> per_row(n);
    for (int p = 0; p < n; ++p) per_row[p] = static_cast<int>(g.neighbors(p).size());
    a.reserve(per_row);
    for (int p = 0; p < n; ++p) {
        auto nbrs = g.neighbors(p);
        auto wts = g.neighbor_weights(p);
        for (size_t i = 0; i < nbrs.size(); ++i) a.insert(p, nbrs[i]) = wts[i];
    }
    a.makeCompressed();
    return a;
}

SparseMatrix build_laplacian(const Graph& g) {
    const int n = g.n_nodes();
    SparseMatrix lap(n, n);
    std::vector<int> per_row(n);
    for (int p = 0; p < n; ++p) per_row[p] = static_cast<int>(g.neighbors(p).size()) + 1;
    lap.reserve(per_row);
    for (int p = 0; p < n; ++p) {
        auto nbrs = g.neighbors(p);
        auto wts = g.neighbor_weights(p);
        // Accumulate the diagonal in the same order the off-diagonals are
        // stored so the row sum cancels exactly.
        double diag = 0.0;
        for (size_t i = 0; i < nbrs.size(); ++i) diag += wts[i];
        size_t i = 0;
        for (; i < nbrs.size() && nbrs[i] < p; ++i) lap.insert(p, nbrs[i]) = -wts[i];
        lap.insert(p, p) = diag;
        for (; i < nbrs.size(); ++i) lap.insert(p, nbrs[i]) = -wts[i];
    }
    lap.makeCompressed();
    return lap;
}

SparseMatrix normalize_laplacian(const SparseMatrix& laplacian) {
    const int n = static_cast<int>(laplacian.rows());
    std::vector<double> inv_sqrt(n, 0.0);
    for (int p = 0; p < n; ++p) {
        const double d = laplacian.coeff(p, p);
        inv_sqrt[p] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;  // isolated nodes stay zero
    }
    SparseMatrix out = laplacian;
    for (int r = 0; r < out.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(out, r); it; ++it) {
            it.valueRef() *= inv_sqrt[r] * inv_sqrt[it.col()];
        }
    }
    out.prune([](int, int, double v) { return v != 0.0; });
    out.makeCompressed();
    return out;
}

}  // namespace spade
