// SPDX-License-Identifier: Apache-2.0
#include "spade/sparse.hpp"

#include <cmath>

namespace spade {

bool is_valid_csr(const SparseMatrix& m) {
    if (!m.isCompressed()) return false;
    const int* offsets = m.outerIndexPtr();
    const int* cols = m.innerIndexPtr();
    const double* vals = m.valuePtr();
    if (offsets[0] != 0 || offsets[m.rows()] != m.nonZeros()) return false;
    for (int r = 0; r < m.rows(); ++r) {
        if (offsets[r + 1] < offsets[r]) return false;
        for (int i = offsets[r]; i < offsets[r + 1]; ++i) {
            if (cols[i] < 0 || cols[i] >= m.cols()) return false;
            if (i > offsets[r] && cols[i] <= cols[i - 1]) return false;
            if (!std::isfinite(vals[i])) return false;
        }
    }
    return true;
}

double symmetry_gap(const SparseMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    SparseMatrix diff = m - SparseMatrix(m.transpose());
    double gap = 0.0;
    for (int r = 0; r < diff.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(diff, r); it; ++it) {
            gap = std::max(gap, std::abs(it.value()));
        }
    }
    return gap;
}

bool is_symmetric(const SparseMatrix& m, double tol) {
    return m.rows() == m.cols() && symmetry_gap(m) <= tol;
}

DenseMatrix to_dense(const SparseMatrix& m) { return DenseMatrix(m); }

SparseMatrix from_dense(const DenseMatrix& m, double drop_tol) {
    SparseMatrix out(m.rows(), m.cols());
    std::vector<Eigen::Triplet<double>> triplets;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) > drop_tol) triplets.emplace_back(r, c, m(r, c));
        }
    }
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

}  // namespace spade
