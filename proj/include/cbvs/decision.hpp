#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbvs/dataset.hpp"
#include "cbvs/gibbs.hpp"
#include "cbvs/orthogonal.hpp"

namespace cbvs {

/// { j : odds_j > 1 } (strict).
std::vector<int> active_set(const Eigen::VectorXd& inclusion_odds);

/// Squared residual norm ||y - x_A b||^2 where b is the posterior mean
/// restricted to the active columns. An empty set gives ||y||^2.
double refit_and_error(const Dataset& data, const std::vector<int>& active,
                       const Eigen::VectorXd& posterior_mean_restricted);

/// sum_j (mean_j 1{j in A} - beta_true_j)^2.
double delta_beta(const Eigen::VectorXd& posterior_mean,
                  const std::vector<int>& active,
                  const Eigen::VectorXd& beta_true);

/// (max - min) / max; defined as 0 when max == 0.
double model_indeterminacy(double min_err, double max_err);

/// Per-configuration fit produced while sweeping.
struct ConfigFit {
  Eigen::VectorXd alpha;
  std::vector<int> active;
  double squared_error = 0;
  Eigen::VectorXd posterior_mean;  ///< full-length, unmasked
  std::optional<double> delta;     ///< set when beta_true is known
};

struct CovariateDecision {
  Status status = Status::Indeterminate;
  OddsInterval odds;
};

/// Confusion counts in the "x-y" convention: `determinate` counts covariates
/// classified that way by the interval rule, `indeterminate` counts the
/// indeterminate covariates that fall on that side in the given fit.
struct ConfusionCounts {
  int active_determinate = 0, active_indeterminate = 0;
  int false_active_determinate = 0, false_active_indeterminate = 0;
  int inactive_determinate = 0, inactive_indeterminate = 0;
  int false_inactive_determinate = 0, false_inactive_indeterminate = 0;
};

struct SelectionReport {
  std::string source;  ///< "closed-form" | "exact" | "gibbs"
  std::vector<CovariateDecision> covariates;
  std::vector<ConfigFit> fits;
  int optimistic_config = 0;
  int pessimistic_config = 0;
  double min_squared_error = 0;
  double max_squared_error = 0;
  double indeterminacy = 0;
  std::optional<double> delta_optimistic;
  std::optional<double> delta_pessimistic;
  std::optional<ConfusionCounts> confusion_optimistic;
  std::optional<ConfusionCounts> confusion_pessimistic;

  int count(Status s) const;
};

/// Aggregates a sensitivity sweep into a report: per-covariate three-way
/// status from the odds bounds, per-configuration refits, min/max error and
/// indeterminacy, plus truth-based metrics when beta_true is supplied.
SelectionReport build_report(const Dataset& data, const SweepResult& sweep,
                             std::string source,
                             const Eigen::VectorXd* beta_true = nullptr);

ConfusionCounts confusion_counts(const SelectionReport& report,
                                 const ConfigFit& fit,
                                 const Eigen::VectorXd& beta_true);

/// Plain-text table (one row per covariate plus the aggregate block).
std::string format_report(const SelectionReport& report);

}  // namespace cbvs
