#pragma once

#include <utility>

#include <Eigen/Core>

#include "cbvs/dataset.hpp"
#include "cbvs/hyperparameters.hpp"

namespace cbvs {

enum class Status { Active, Inactive, Indeterminate };

const char* to_string(Status s);

/// One shrinkage component of the coordinatewise posterior under orthogonal
/// design with known sigma2: shrunk mean, component variance and log weight.
struct ShrinkageComponent {
  int k = 0;            ///< 0 = spike, 1 = slab
  double beta_hat = 0;  ///< n tau_k^2 beta_hat_j / (n tau_k^2 + 1)
  double var = 0;       ///< sigma2 tau_k^2 / (n tau_k^2 + 1)
  double log_w = 0;     ///< log w_{k,j}
};

/// Two-component normal mixture posterior of a single coefficient.
struct CoefficientMixturePosterior {
  double weight_slab = 0;
  double weight_spike = 0;
  double slab_mean = 0, slab_var = 0;
  double spike_mean = 0, spike_var = 0;
  double log_norm = 0;  ///< log W_j

  double mean() const;
  double variance() const;
  double cdf(double t) const;
};

/// Bounds of the posterior odds of gamma_j = 1 over an alpha interval.
struct OddsInterval {
  double lower = 0;
  double upper = 0;
};

/// Least-squares estimate x^T y / n. Requires ||x^T x / n - I||_max <= 1e-8;
/// throws PreconditionError naming the worst entry otherwise.
Eigen::VectorXd ols_orthogonal(const Dataset& data);

ShrinkageComponent shrinkage_component(int k, double beta_hat_j, Eigen::Index n,
                                       double sigma2, const Hyperparameters& hp);

/// Bernoulli posterior probability alpha w1 / (alpha w1 + (1-alpha) w0),
/// evaluated in log domain.
double gamma_posterior_prob(double alpha_j, double log_w1, double log_w0);

/// Odds bounds over [lo, hi]; by monotonicity only the endpoints are used.
OddsInterval odds_interval(double lo, double hi, double log_w1, double log_w0);

/// Active iff lower > 1, Inactive iff upper < 1, else Indeterminate.
/// Boundary equality is Indeterminate.
Status classify(const OddsInterval& odds);

CoefficientMixturePosterior coefficient_posterior(double alpha_j, double beta_hat_j,
                                                  Eigen::Index n, double sigma2,
                                                  const Hyperparameters& hp);

double posterior_mean(double alpha_j, double beta_hat_j, Eigen::Index n,
                      double sigma2, const Hyperparameters& hp);

double posterior_variance(double alpha_j, double beta_hat_j, Eigen::Index n,
                          double sigma2, const Hyperparameters& hp);

/// The two beta_hat^2 thresholds bracketing the indeterminacy region for
/// alpha in [eps1, 1 - eps2]. Below .first the spike component dominates at
/// every alpha in the box; above .second the slab dominates. Raw values are
/// returned; either may be negative in extreme settings.
std::pair<double, double> indeterminacy_region(Eigen::Index n, double sigma2,
                                               const Hyperparameters& hp,
                                               double eps1, double eps2);

}  // namespace cbvs
