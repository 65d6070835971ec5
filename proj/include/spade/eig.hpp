// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "spade/sparse.hpp"

namespace spade {

/// Top eigenpairs of the pencil L_Y^+ L_X. Eigenvalues are sorted descending;
/// eigenvector columns have unit 2-norm and are orthogonal to null(L_Y).
struct EigenPairs {
    Vector eigenvalues;       // s, descending
    DenseMatrix eigenvectors; // n x s
};

struct CgOptions {
    double rtol = 1e-12;  // relative residual target
    int max_iters = 0;    // 0 means 10 * n
};

/// Connected components of the off-diagonal sparsity pattern; component ids
/// ordered by smallest member.
std::vector<int> matrix_components(const SparseMatrix& m, int* n_components = nullptr);

/// Orthonormal basis of the Laplacian nullspace: one normalized component
/// indicator per column.
DenseMatrix nullspace_indicators(const SparseMatrix& laplacian);

/// Minimum-norm solution of L y = P x where P projects out null(L).
/// Jacobi-preconditioned conjugate gradients with nullspace deflation.
Vector apply_pseudoinverse(const SparseMatrix& laplacian, const Vector& x,
                           const CgOptions& opts = {});

/// Exact top-s eigenpairs of L_Y^+ L_X by dense eigendecomposition of L_Y
/// restricted to its range. Oracle path; limited to n <= 2000.
EigenPairs dense_generalized_eig(const SparseMatrix& l_x, const SparseMatrix& l_y, int s);

/// Top-s eigenpairs via Lanczos iteration in the L_Y inner product on the
/// operator x -> L_Y^+ (L_X x); L_Y^+ applied by deflated CG. Requires
/// null(L_Y) ⊆ null(L_X) and verifies it on the component indicators.
/// Stops when every returned pair satisfies
/// ||L_X v - ζ L_Y v|| <= tol ||L_X v||.
EigenPairs iterative_generalized_eig(const SparseMatrix& l_x, const SparseMatrix& l_y,
                                     int s, double tol = 1e-6);

}  // namespace spade
