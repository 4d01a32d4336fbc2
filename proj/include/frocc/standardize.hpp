#pragma once

#include <Eigen/Dense>

#include "frocc/core.hpp"

namespace frocc {

// Per-column affine rescaling to zero mean and unit variance, estimated on
// training data only. Constant columns keep scale 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::Ref<const RowMatrix<double>>& points);

  Eigen::Index dim() const { return mean.size(); }

  RowMatrix<double> transform(const Eigen::Ref<const RowMatrix<double>>& points) const;

  template <typename Derived>
  Eigen::VectorXd transform_point(const Eigen::DenseBase<Derived>& x) const {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) out(k) = (x.coeff(k) - mean(k)) / scale(k);
    return out;
  }

  friend bool operator==(const Standardizer& a, const Standardizer& b) {
    return a.mean.size() == b.mean.size() && a.scale.size() == b.scale.size() && a.mean == b.mean &&
           a.scale == b.scale;
  }
};

}  // namespace frocc
