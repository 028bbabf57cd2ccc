#include "cbvs/orthogonal.hpp"

#include <cmath>
#include <string>

#include "cbvs/errors.hpp"
#include "cbvs/math.hpp"

namespace cbvs {

namespace {

constexpr double kOrthogonalityTol = 1e-8;

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Active: return "active";
    case Status::Inactive: return "inactive";
    case Status::Indeterminate: return "indeterminate";
  }
  return "?";
}

Eigen::VectorXd ols_orthogonal(const Dataset& data) {
  data.validate();
  const auto n = data.n();
  const Eigen::MatrixXd gram = data.x.transpose() * data.x / static_cast<double>(n);
  Eigen::Index wi = 0, wj = 0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      const double dev = std::abs(gram(i, j) - (i == j ? 1.0 : 0.0));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > kOrthogonalityTol)
    throw PreconditionError("design is not orthogonal: |x'x/n - I| = " +
                            std::to_string(worst) + " at entry (" +
                            std::to_string(wi) + ", " + std::to_string(wj) + ")");
  return data.x.transpose() * data.y / static_cast<double>(n);
}

ShrinkageComponent shrinkage_component(int k, double beta_hat_j, Eigen::Index n,
                                       double sigma2, const Hyperparameters& hp) {
  if (k != 0 && k != 1) throw PreconditionError("selector bit must be 0 or 1");
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (!(sigma2 > 0)) throw PreconditionError("sigma2 must be positive");
  const double tau = k ? hp.tau1 : hp.tau0;
  const double c = static_cast<double>(n) * tau * tau;  // n tau_k^2
  ShrinkageComponent out;
  out.k = k;
  out.beta_hat = c * beta_hat_j / (c + 1.0);
  out.var = sigma2 * tau * tau / (c + 1.0);
  out.log_w = -0.5 * std::log(c + 1.0) -
              static_cast<double>(n) * beta_hat_j * beta_hat_j /
                  (2.0 * sigma2 * (c + 1.0));
  return out;
}

double gamma_posterior_prob(double alpha_j, double log_w1, double log_w0) {
  if (!(alpha_j > 0.0 && alpha_j < 1.0))
    throw PreconditionError("alpha_j must lie in (0, 1)");
  // log odds = logit(alpha) + log w1 - log w0
  const double t = std::log(alpha_j) - std::log1p(-alpha_j) + log_w1 - log_w0;
  return sigmoid(t);
}

OddsInterval odds_interval(double lo, double hi, double log_w1, double log_w0) {
  if (!(0.0 < lo && lo <= hi && hi < 1.0))
    throw PreconditionError("odds interval requires 0 < lo <= hi < 1");
  const double lw = log_w1 - log_w0;
  OddsInterval out;
  out.lower = std::exp(std::log(lo) - std::log1p(-lo) + lw);
  out.upper = std::exp(std::log(hi) - std::log1p(-hi) + lw);
  return out;
}

Status classify(const OddsInterval& odds) {
  if (odds.lower > 1.0) return Status::Active;
  if (odds.upper < 1.0) return Status::Inactive;
  return Status::Indeterminate;
}

CoefficientMixturePosterior coefficient_posterior(double alpha_j, double beta_hat_j,
                                                  Eigen::Index n, double sigma2,
                                                  const Hyperparameters& hp) {
  if (!(alpha_j > 0.0 && alpha_j < 1.0))
    throw PreconditionError("alpha_j must lie in (0, 1)");
  const auto slab = shrinkage_component(1, beta_hat_j, n, sigma2, hp);
  const auto spike = shrinkage_component(0, beta_hat_j, n, sigma2, hp);
  const double l1 = std::log(alpha_j) + slab.log_w;
  const double l0 = std::log1p(-alpha_j) + spike.log_w;
  const double log_norm = log_sum_exp(l1, l0);
  CoefficientMixturePosterior out;
  out.weight_slab = std::exp(l1 - log_norm);
  out.weight_spike = std::exp(l0 - log_norm);
  out.slab_mean = slab.beta_hat;
  out.slab_var = slab.var;
  out.spike_mean = spike.beta_hat;
  out.spike_var = spike.var;
  out.log_norm = log_norm;
  return out;
}

double CoefficientMixturePosterior::mean() const {
  return weight_slab * slab_mean + weight_spike * spike_mean;
}

double CoefficientMixturePosterior::variance() const {
  const double within = weight_slab * slab_var + weight_spike * spike_var;
  const double d = slab_mean - spike_mean;
  return within + weight_slab * weight_spike * d * d;
}

double CoefficientMixturePosterior::cdf(double t) const {
  return weight_slab * normal_cdf(t, slab_mean, std::sqrt(slab_var)) +
         weight_spike * normal_cdf(t, spike_mean, std::sqrt(spike_var));
}

double posterior_mean(double alpha_j, double beta_hat_j, Eigen::Index n,
                      double sigma2, const Hyperparameters& hp) {
  return coefficient_posterior(alpha_j, beta_hat_j, n, sigma2, hp).mean();
}

double posterior_variance(double alpha_j, double beta_hat_j, Eigen::Index n,
                          double sigma2, const Hyperparameters& hp) {
  return coefficient_posterior(alpha_j, beta_hat_j, n, sigma2, hp).variance();
}

std::pair<double, double> indeterminacy_region(Eigen::Index n, double sigma2,
                                               const Hyperparameters& hp,
                                               double eps1, double eps2) {
  if (!(eps1 > 0.0 && eps1 <= 0.5) || !(eps2 > 0.0 && eps2 <= 0.5))
    throw PreconditionError("eps1, eps2 must lie in (0, 0.5]");
  if (!(sigma2 > 0) || n < 1) throw PreconditionError("need n >= 1, sigma2 > 0");
  const double c1 = static_cast<double>(n) * hp.tau1 * hp.tau1;
  const double c0 = static_cast<double>(n) * hp.tau0 * hp.tau0;
  const double factor =
      sigma2 / static_cast<double>(n) * (c1 + 1.0) * (c0 + 1.0) / (c1 - c0);
  const double log_ratio = std::log((c1 + 1.0) / (c0 + 1.0));
  // Below `lower` the spike dominates at every alpha in [eps1, 1-eps2];
  // above `upper` the slab dominates. Raw values, possibly negative.
  const double lower = factor * (2.0 * std::log(eps2 / (1.0 - eps2)) + log_ratio);
  const double upper = factor * (2.0 * std::log((1.0 - eps1) / eps1) + log_ratio);
  return {lower, upper};
}

}  // namespace cbvs
