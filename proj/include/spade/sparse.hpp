// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace spade {

// Compressed-sparse-row carrier shared by Laplacians, adjacency and feature
// matrices. Row-major Eigen sparse storage is CSR: outerIndexPtr() holds the
// row offsets, innerIndexPtr() the column indices, valuePtr() the values.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Checks the CSR invariants: compressed storage, non-decreasing row offsets,
/// strictly increasing in-range column indices per row, finite values.
bool is_valid_csr(const SparseMatrix& m);

/// Max |m - m^T| over stored entries.
double symmetry_gap(const SparseMatrix& m);

bool is_symmetric(const SparseMatrix& m, double tol = 1e-10);

DenseMatrix to_dense(const SparseMatrix& m);

SparseMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);

}  // namespace spade
