#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cbvs/dataset.hpp"
#include "cbvs/hyperparameters.hpp"

namespace cbvs {

/// Inclusion pattern gamma over the p covariates.
using ModelIndicator = std::vector<int>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1ULL << 20;

/// Per-model linear algebra: L = (x^T x + D_gamma)^{-1}, mu = L x^T y,
/// r = (y^T y - mu^T L^{-1} mu) / 2 + b, plus log|L|.
struct ModelGeometry {
  Eigen::MatrixXd L;
  Eigen::VectorXd mu;
  double r = 0;
  double log_det_L = 0;
};

ModelGeometry model_geometry(const ModelIndicator& gamma, const Dataset& data,
                             const Hyperparameters& hp);

/// Unnormalized log posterior mass of one model. Valid for any p.
double model_log_score(const ModelIndicator& gamma, const Dataset& data,
                       const Eigen::VectorXd& alpha, const Hyperparameters& hp);

/// Full model space posterior; models are indexed by the bit mask
/// m = sum_j gamma_j 2^j. Probabilities are normalized by log-sum-exp.
struct EnumeratedPosterior {
  Eigen::VectorXd log_prob;  ///< normalized, size 2^p

  double prob(std::uint64_t mask) const { return std::exp(log_prob(static_cast<Eigen::Index>(mask))); }
};

/// Enumerate all 2^p models. Throws CapacityError when 2^p exceeds `cap`
/// (use the Gibbs sampler instead). For p <= 16 the scan runs in Gray-code
/// order with rank-1 Cholesky updates; larger p recomputes per model.
EnumeratedPosterior enumerate_posterior(const Dataset& data,
                                        const Eigen::VectorXd& alpha,
                                        const Hyperparameters& hp,
                                        std::uint64_t cap = kDefaultEnumerationCap);

/// Closed-form posterior odds P(gamma_a | y) / P(gamma_b | y).
double model_odds(const ModelIndicator& gamma_a, const ModelIndicator& gamma_b,
                  const Dataset& data, const Eigen::VectorXd& alpha,
                  const Hyperparameters& hp);

/// P(gamma_j = 1 | y) by exhaustive summation.
Eigen::VectorXd marginal_inclusion_exact(const Dataset& data,
                                         const Eigen::VectorXd& alpha,
                                         const Hyperparameters& hp,
                                         std::uint64_t cap = kDefaultEnumerationCap);

/// One multivariate-t component of the joint coefficient posterior.
struct TMixtureComponent {
  double weight = 0;
  ModelIndicator gamma;
  Eigen::VectorXd mean;   ///< mu_gamma
  Eigen::MatrixXd scale;  ///< (2 r_gamma / (n + 2a)) L_gamma
  double dof = 0;         ///< n + 2a
};

struct TMixture {
  std::vector<TMixtureComponent> components;

  Eigen::VectorXd posterior_mean() const;
  double log_density(const Eigen::VectorXd& beta) const;
};

TMixture beta_posterior_mixture_exact(const Dataset& data,
                                      const Eigen::VectorXd& alpha,
                                      const Hyperparameters& hp,
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Evaluates both sides of the product-expansion identity for the joint
/// marginal prior of beta: .first is the direct log product of mixtures,
/// .second the log of the expanded 2^p-term sum. Requires p <= 12.
std::pair<double, double> verify_product_expansion(const Eigen::VectorXd& beta,
                                                   const Eigen::VectorXd& alpha,
                                                   double sigma2,
                                                   const Hyperparameters& hp);

}  // namespace cbvs
