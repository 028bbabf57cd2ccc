#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbvs/dataset.hpp"

namespace cbvs {

/// Recipe for a synthetic regression problem: AR-style column correlation
/// corr_base^|i-j|, coefficients uniform on [-coef_high,-coef_low] u
/// [coef_low, coef_high] on a random support, Gaussian noise.
struct SynthSpec {
  Eigen::Index n = 50;
  Eigen::Index p = 100;
  Eigen::Index n_active = 10;
  double corr_base = 0.2;
  double noise_var = 4.0;  ///< variance, not sd
  double coef_low = 1.0;
  double coef_high = 4.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  Dataset data;
  Eigen::VectorXd beta_true;
  std::vector<int> active_indices;  ///< sorted
};

SyntheticData generate_synthetic(const SynthSpec& spec);

/// Ridge-based heuristic for a prior inclusion interval: fit ridge, compute
/// approximate two-sided p-values from sandwich standard errors, count the
/// covariates below each threshold. Documented approximation.
struct ElicitationResult {
  double alpha_lo = 0;
  double alpha_hi = 0;
  std::map<double, int> counts_at_thresholds;
  std::string method = "ridge-pvalue";
};

ElicitationResult elicit_alpha_interval(const Dataset& data, double p_low = 0.01,
                                        double p_high = 0.2,
                                        double ridge_penalty = 1.0);

/// Top `keep` column indices by |Pearson correlation with y|; ties break by
/// column index, zero-variance columns count as correlation 0.
std::vector<int> screen_covariates(const Dataset& data, Eigen::Index keep);

/// Named alpha-interval presets for the bundled analyses.
struct AlphaPreset {
  double lo, hi;
};
const std::map<std::string, AlphaPreset>& alpha_presets();

}  // namespace cbvs
