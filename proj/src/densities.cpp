#include "cbvs/densities.hpp"

#include <cmath>

#include "cbvs/errors.hpp"
#include "cbvs/math.hpp"

namespace cbvs {

double spike_slab_log_density(double beta_j, int gamma, double sigma2,
                              const Hyperparameters& hp) {
  if (!std::isfinite(beta_j)) throw PreconditionError("beta_j must be finite");
  if (gamma != 0 && gamma != 1)
    throw PreconditionError("selector bit must be 0 or 1");
  if (!(sigma2 > 0) || !std::isfinite(sigma2))
    throw PreconditionError("sigma2 must be positive and finite");
  const double tau = gamma ? hp.tau1 : hp.tau0;
  return log_normal_pdf(beta_j, 0.0, sigma2 * tau * tau);
}

double marginal_prior_log_density(double beta_j, double alpha_j, double sigma2,
                                  const Hyperparameters& hp) {
  if (!(alpha_j > 0.0 && alpha_j < 1.0))
    throw PreconditionError("alpha_j must lie in (0, 1)");
  const double slab = std::log(alpha_j) + spike_slab_log_density(beta_j, 1, sigma2, hp);
  const double spike =
      std::log1p(-alpha_j) + spike_slab_log_density(beta_j, 0, sigma2, hp);
  return log_sum_exp(slab, spike);
}

}  // namespace cbvs
