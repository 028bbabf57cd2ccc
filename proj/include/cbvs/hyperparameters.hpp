#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace cbvs {

/// Fixed scale and shape constants of the hierarchical model. Defaults for
/// s, a, b are deliberately vague and overridable.
struct Hyperparameters {
  double tau0 = 1e-6;  ///< spike scale
  double tau1 = 1.0;   ///< slab scale
  double s = 1.0;      ///< beta concentration
  double a = 0.01;     ///< inverse-gamma shape
  double b = 0.01;     ///< inverse-gamma rate

  /// Throws PreconditionError on hard violations (non-positive values,
  /// tau0 >= tau1). Returns advisory warnings for legal but suspicious
  /// settings (e.g. tau0 >= 1 or tau1 <= 1).
  std::vector<std::string> validate() const;
};

/// Per-covariate interval [lo_j, hi_j] of prior inclusion probabilities.
/// A degenerate box (lo == hi) encodes a single precise prior.
struct AlphaBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static AlphaBox uniform(Eigen::Index p, double lo, double hi);

  Eigen::Index p() const { return lo.size(); }
  bool degenerate() const { return (lo.array() == hi.array()).all(); }

  /// Throws PreconditionError unless 0 < lo_j <= hi_j < 1 for all j.
  void validate() const;
};

}  // namespace cbvs
