#pragma once

#include "cbvs/hyperparameters.hpp"

namespace cbvs {

/// Log density of the coefficient prior conditional on its selector bit:
/// N(0, sigma2 * tau1^2) when gamma = 1, N(0, sigma2 * tau0^2) when gamma = 0.
double spike_slab_log_density(double beta_j, int gamma, double sigma2,
                              const Hyperparameters& hp);

/// Log of the two-component marginal prior
/// alpha_j * f1(beta_j) + (1 - alpha_j) * f0(beta_j), via log-sum-exp.
double marginal_prior_log_density(double beta_j, double alpha_j, double sigma2,
                                  const Hyperparameters& hp);

}  // namespace cbvs
