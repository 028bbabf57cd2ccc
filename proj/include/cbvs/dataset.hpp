#pragma once

#include <Eigen/Core>

namespace cbvs {

/// Response vector plus design matrix. When `standardized` is set, y is
/// centred and each column of x has sample mean 0 and sample variance 1
/// (n-1 denominator); the original column means/scales are kept so fitted
/// quantities can be mapped back.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  bool standardized = false;
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;
  double y_mean = 0.0;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }

  /// Throws PreconditionError on shape mismatch, non-finite entries, or a
  /// stale `standardized` flag.
  void validate() const;
};

/// Centre y and centre+unit-scale the columns of x. Idempotent. A column
/// with zero variance keeps scale 1 and is only centred.
Dataset standardize(const Dataset& data);

}  // namespace cbvs
