// SPDX-License-Identifier: Apache-2.0
#include "spade/eig.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "spade/errors.hpp"
#include "spade/rng.hpp"

namespace spade {

namespace {

double max_abs(const SparseMatrix& m) {
    double mx = 0.0;
    for (int i = 0; i < m.nonZeros(); ++i) mx = std::max(mx, std::abs(m.valuePtr()[i]));
    return mx;
}

void validate_pencil(const SparseMatrix& l_x, const SparseMatrix& l_y) {
    if (l_x.rows() != l_x.cols() || l_y.rows() != l_y.cols() || l_x.rows() != l_y.rows()) {
        throw ValidationError("generalized eig: matrices must be square and same size");
    }
    if (symmetry_gap(l_x) > 1e-10 * std::max(1.0, max_abs(l_x))) {
        throw ValidationError("generalized eig: L_X is not symmetric");
    }
    if (symmetry_gap(l_y) > 1e-10 * std::max(1.0, max_abs(l_y))) {
        throw ValidationError("generalized eig: L_Y is not symmetric");
    }
}

}  // namespace

std::vector<int> matrix_components(const SparseMatrix& m, int* n_components) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> comp(n, -1);
    std::vector<int> stack;
    int next = 0;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            for (SparseMatrix::InnerIterator it(m, p); it; ++it) {
                const int q = static_cast<int>(it.col());
                if (q != p && it.value() != 0.0 && comp[q] < 0) {
                    comp[q] = next;
                    stack.push_back(q);
                }
            }
        }
        ++next;
    }
    if (n_components) *n_components = next;
    return comp;
}

DenseMatrix nullspace_indicators(const SparseMatrix& laplacian) {
    int n_comp = 0;
    std::vector<int> comp = matrix_components(laplacian, &n_comp);
    const int n = static_cast<int>(laplacian.rows());
    std::vector<int> sizes(n_comp, 0);
    for (int v = 0; v < n; ++v) ++sizes[comp[v]];
    DenseMatrix basis = DenseMatrix::Zero(n, n_comp);
    for (int v = 0; v < n; ++v) {
        basis(v, comp[v]) = 1.0 / std::sqrt(static_cast<double>(sizes[comp[v]]));
    }
    return basis;
}

Vector apply_pseudoinverse(const SparseMatrix& laplacian, const Vector& x,
                           const CgOptions& opts) {
    const int n = static_cast<int>(laplacian.rows());
    if (x.size() != n) throw ParameterError("apply_pseudoinverse: size mismatch");

    const DenseMatrix nullbasis = nullspace_indicators(laplacian);
    auto project = [&](Vector& v) { v.noalias() -= nullbasis * (nullbasis.transpose() * v); };

    Vector b = x;
    project(b);
    const double bnorm = b.norm();
    Vector y = Vector::Zero(n);
    if (bnorm == 0.0) return y;

    Vector inv_diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = laplacian.coeff(i, i);
        inv_diag(i) = d > 0.0 ? 1.0 / d : 0.0;
    }

    const int max_iters = opts.max_iters > 0 ? opts.max_iters : 10 * n;
    Vector r = b;
    Vector z = inv_diag.asDiagonal() * r;
    Vector p = z;
    double rz = r.dot(z);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (r.norm() <= opts.rtol * bnorm) {
            project(y);
            return y;
        }
        Vector q = laplacian * p;
        const double pq = p.dot(q);
        if (pq <= 0.0) {
            throw ConvergenceError("apply_pseudoinverse: CG stagnated (non-positive curvature)");
        }
        const double alpha = rz / pq;
        y += alpha * p;
        r -= alpha * q;
        if ((iter & 31) == 31) project(r);  // kill nullspace drift
        z = inv_diag.asDiagonal() * r;
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    if (r.norm() <= opts.rtol * bnorm) {
        project(y);
        return y;
    }
    throw ConvergenceError("apply_pseudoinverse: CG did not reach rtol=" +
                           std::to_string(opts.rtol) + " within " +
                           std::to_string(max_iters) + " iterations");
}

EigenPairs dense_generalized_eig(const SparseMatrix& l_x, const SparseMatrix& l_y, int s) {
    validate_pencil(l_x, l_y);
    const int n = static_cast<int>(l_x.rows());
    if (n > 2000) {
        throw ParameterError("dense_generalized_eig: n=" + std::to_string(n) +
                             " exceeds the dense-path bound of 2000");
    }
    if (s < 1) throw ParameterError("dense_generalized_eig: s must be >= 1");

    const DenseMatrix y_dense = to_dense(l_y);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es_y(y_dense);
    const Vector lam = es_y.eigenvalues();  // ascending
    const double rank_tol = n * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, lam.cwiseAbs().maxCoeff());
    int rank = 0;
    for (int i = 0; i < n; ++i) {
        if (lam(i) > rank_tol) ++rank;
    }
    if (s > rank) {
        throw RankError("dense_generalized_eig: s=" + std::to_string(s) +
                        " exceeds rank(L_Y)=" + std::to_string(rank));
    }

    // Restrict to range(L_Y): with L_Y = Q Λ Q^T (Λ > 0), the pencil reduces
    // to the symmetric matrix B = Λ^{-1/2} Q^T L_X Q Λ^{-1/2}, whose
    // eigenpairs (μ, w) map back as v = Q Λ^{-1/2} w.
    const DenseMatrix q_range = es_y.eigenvectors().rightCols(rank);
    Vector inv_sqrt(rank);
    for (int i = 0; i < rank; ++i) inv_sqrt(i) = 1.0 / std::sqrt(lam(n - rank + i));

    const DenseMatrix x_dense = to_dense(l_x);
    DenseMatrix b = inv_sqrt.asDiagonal() * (q_range.transpose() * x_dense * q_range) *
                    inv_sqrt.asDiagonal();
    b = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es_b(b);

    EigenPairs out;
    out.eigenvalues.resize(s);
    out.eigenvectors.resize(n, s);
    for (int i = 0; i < s; ++i) {
        const int src = rank - 1 - i;  // descending
        out.eigenvalues(i) = es_b.eigenvalues()(src);
        Vector v = q_range * (inv_sqrt.asDiagonal() * es_b.eigenvectors().col(src));
        out.eigenvectors.col(i) = v / v.norm();
    }
    return out;
}

EigenPairs iterative_generalized_eig(const SparseMatrix& l_x, const SparseMatrix& l_y,
                                     int s, double tol) {
    validate_pencil(l_x, l_y);
    const int n = static_cast<int>(l_x.rows());
    if (s < 1) throw ParameterError("iterative_generalized_eig: s must be >= 1");
    if (!(tol > 0.0)) throw ParameterError("iterative_generalized_eig: tol must be > 0");

    const DenseMatrix nullbasis = nullspace_indicators(l_y);
    const int n_comp = static_cast<int>(nullbasis.cols());
    for (int c = 0; c < n_comp; ++c) {
        const double viol = (l_x * nullbasis.col(c)).norm();
        if (viol > 1e-6) {
            throw ContainmentError(
                c, "iterative_generalized_eig: null(L_Y) not contained in null(L_X); "
                   "component " + std::to_string(c) + " violates by " + std::to_string(viol));
        }
    }
    const int rank = n - n_comp;
    if (s > rank) {
        throw RankError("iterative_generalized_eig: s=" + std::to_string(s) +
                        " exceeds rank(L_Y)=" + std::to_string(rank));
    }

    auto project_null = [&](Vector& v) {
        v.noalias() -= nullbasis * (nullbasis.transpose() * v);
    };

    // Lanczos in the L_Y inner product with full reorthogonalization. The
    // basis Q is B-orthonormal (B = L_Y) and orthogonal to null(L_Y); the
    // projected operator is the tridiagonal T.
    const int m_cap = std::min(rank, std::max({4 * s + 20, 100, s + 2}));
    Rng rng(0x51ade);
    std::vector<Vector> basis;       // q_j
    std::vector<Vector> basis_by;    // L_Y q_j
    std::vector<double> alphas, betas;  // betas[j] couples q_j and q_{j+1}

    CgOptions cg;
    cg.rtol = std::min(1e-12, tol * 1e-4);

    auto b_orthogonalize = [&](Vector& w) {
        for (int pass = 0; pass < 2; ++pass) {
            for (size_t i = 0; i < basis.size(); ++i) {
                w -= basis_by[i].dot(w) * basis[i];
            }
        }
    };

    auto fresh_direction = [&]() -> Vector {
        for (int attempt = 0; attempt < 32; ++attempt) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.normal();
            project_null(v);
            b_orthogonalize(v);
            const double bn = std::sqrt(std::max(0.0, v.dot(l_y * v)));
            if (bn > 1e-8 * v.norm() && v.norm() > 0.0) return v / bn;
        }
        throw ConvergenceError("iterative_generalized_eig: could not draw a fresh direction");
    };

    EigenPairs out;
    const int check_stride = std::max(2, s / 2);
    int max_dim = m_cap;
    basis.push_back(fresh_direction());
    basis_by.push_back(l_y * basis.back());

    while (true) {
        const int j = static_cast<int>(alphas.size());
        const Vector q = basis[j];  // copy: push_back below invalidates references
        Vector xq = l_x * q;
        Vector w = apply_pseudoinverse(l_y, xq, cg);
        const double alpha = q.dot(xq);
        alphas.push_back(alpha);
        w -= alpha * q;
        if (j > 0 && betas[j - 1] != 0.0) w -= betas[j - 1] * basis[j - 1];
        b_orthogonalize(w);
        Vector by_w = l_y * w;
        double beta = std::sqrt(std::max(0.0, w.dot(by_w)));

        const int dim = j + 1;
        bool exhausted = dim >= rank;
        if (beta > 1e-10 * std::max(1.0, std::abs(alpha)) && !exhausted) {
            betas.push_back(beta);
            basis.push_back(w / beta);
            basis_by.push_back(by_w / beta);
        } else if (!exhausted) {
            betas.push_back(0.0);  // invariant subspace hit; restart a new block
            basis.push_back(fresh_direction());
            basis_by.push_back(l_y * basis.back());
        }

        const bool must_check = exhausted || dim >= max_dim ||
                                (dim >= s && (dim - s) % check_stride == 0);
        if (!must_check) continue;

        // Rayleigh-Ritz on the tridiagonal section.
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es_t;
        Vector diag = Eigen::Map<const Vector>(alphas.data(), dim);
        Vector sub = dim > 1 ? Eigen::Map<const Vector>(betas.data(), dim - 1) : Vector();
        es_t.computeFromTridiagonal(diag, sub);
        if (dim < s) {
            if (exhausted) {
                throw ConvergenceError("iterative_generalized_eig: basis exhausted early");
            }
            continue;
        }

        out.eigenvalues.resize(s);
        out.eigenvectors.resize(n, s);
        bool converged = true;
        for (int i = 0; i < s; ++i) {
            const int src = dim - 1 - i;
            const double theta = es_t.eigenvalues()(src);
            Vector v = Vector::Zero(n);
            for (int t = 0; t < dim; ++t) v += es_t.eigenvectors()(t, src) * basis[t];
            const Vector xv = l_x * v;
            const Vector yv = l_y * v;
            const double resid = (xv - theta * yv).norm();
            if (resid > tol * std::max(xv.norm(), 1e-300)) {
                converged = false;
                break;
            }
            out.eigenvalues(i) = theta;
            out.eigenvectors.col(i) = v / v.norm();
        }
        if (converged) return out;
        if (exhausted) {
            throw ConvergenceError(
                "iterative_generalized_eig: residual above tol with the basis exhausted");
        }
        if (dim >= max_dim) {
            if (max_dim >= std::min(rank, 1200)) {
                throw ConvergenceError(
                    "iterative_generalized_eig: no convergence after basis size " +
                    std::to_string(dim));
            }
            max_dim = std::min(rank, 2 * max_dim);
        }
    }
}

}  // namespace spade
