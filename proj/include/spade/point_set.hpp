// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace spade {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major point cloud, one row per point. Immutable after
/// construction; validated for finiteness.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(RowMatrix coords);

    int n_points() const { return static_cast<int>(coords_.rows()); }
    int dim() const { return static_cast<int>(coords_.cols()); }
    const RowMatrix& coords() const { return coords_; }
    Eigen::Ref<const Eigen::RowVectorXd> point(int i) const { return coords_.row(i); }

    double squared_distance(int i, int j) const {
        return (coords_.row(i) - coords_.row(j)).squaredNorm();
    }

private:
    RowMatrix coords_;
};

}  // namespace spade
