#include "cbvs/model_space.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "cbvs/densities.hpp"
#include "cbvs/errors.hpp"
#include "cbvs/math.hpp"

namespace cbvs {

namespace {

double diag_entry(int gamma_j, const Hyperparameters& hp) {
  const double tau = gamma_j ? hp.tau1 : hp.tau0;
  return 1.0 / (tau * tau);
}

/// Lower Cholesky factor of x^T x + D_gamma with escalating diagonal jitter.
Eigen::MatrixXd chol_with_jitter(Eigen::MatrixXd a) {
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd m = a;
    if (jitter > 0) m.diagonal().array() += jitter * a.diagonal().maxCoeff();
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericError("Cholesky factorization of x'x + D_gamma failed after jitter escalation");
}

struct ScoreTerms {
  double log_det_L = 0;  ///< log |(x'x + D)^{-1}|
  double quad = 0;       ///< (x'y)' (x'x + D)^{-1} (x'y)
};

ScoreTerms score_terms(const Eigen::MatrixXd& chol_lower, const Eigen::VectorXd& xty) {
  ScoreTerms t;
  t.log_det_L = -2.0 * chol_lower.diagonal().array().log().sum();
  const Eigen::VectorXd z =
      chol_lower.triangularView<Eigen::Lower>().solve(xty);
  t.quad = z.squaredNorm();
  return t;
}

double assemble_score(const ModelIndicator& gamma, const Eigen::VectorXd& alpha,
                      const Hyperparameters& hp, const ScoreTerms& terms,
                      double yty, Eigen::Index n) {
  const auto p = static_cast<Eigen::Index>(gamma.size());
  double prior = 0.0;
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (gamma[j]) {
      prior += std::log(alpha(j));
      ++k;
    } else {
      prior += std::log1p(-alpha(j));
    }
  }
  const double rate = hp.b + 0.5 * (yty - terms.quad);
  if (!(rate > 0)) throw NumericError("non-positive inverse-gamma rate in model score");
  return prior + 0.5 * terms.log_det_L - static_cast<double>(k) * std::log(hp.tau1) -
         static_cast<double>(p - k) * std::log(hp.tau0) -
         (0.5 * static_cast<double>(n) + hp.a) * std::log(rate);
}

void check_dims(const Dataset& data, const Eigen::VectorXd& alpha) {
  data.validate();
  if (alpha.size() != data.p())
    throw PreconditionError("alpha vector length does not match p");
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    if (!(alpha(j) > 0 && alpha(j) < 1))
      throw PreconditionError("alpha entries must lie in (0, 1)");
}

/// In-place rank-1 update L L' += v v', lower triangular L, v destroyed.
void chol_update(Eigen::MatrixXd& L, Eigen::VectorXd& v, Eigen::Index start) {
  const Eigen::Index p = L.rows();
  for (Eigen::Index k = start; k < p; ++k) {
    const double r = std::hypot(L(k, k), v(k));
    const double c = r / L(k, k);
    const double s = v(k) / L(k, k);
    L(k, k) = r;
    for (Eigen::Index i = k + 1; i < p; ++i) {
      L(i, k) = (L(i, k) + s * v(i)) / c;
      v(i) = c * v(i) - s * L(i, k);
    }
  }
}

/// In-place rank-1 downdate L L' -= v v'. Returns false on breakdown.
bool chol_downdate(Eigen::MatrixXd& L, Eigen::VectorXd& v, Eigen::Index start) {
  const Eigen::Index p = L.rows();
  for (Eigen::Index k = start; k < p; ++k) {
    const double r2 = (L(k, k) - v(k)) * (L(k, k) + v(k));
    if (!(r2 > 0)) return false;
    const double r = std::sqrt(r2);
    const double c = r / L(k, k);
    const double s = v(k) / L(k, k);
    L(k, k) = r;
    for (Eigen::Index i = k + 1; i < p; ++i) {
      L(i, k) = (L(i, k) - s * v(i)) / c;
      v(i) = c * v(i) - s * L(i, k);
    }
  }
  return true;
}

// Rank-1 spike/slab swaps cancel catastrophically when the spike precision
// dwarfs the Gram diagonal, so the fast path also requires a moderate tau0.
bool gray_code_safe(Eigen::Index p, const Hyperparameters& hp) {
  return p <= 16 && 1.0 / (hp.tau0 * hp.tau0) <= 1e9;
}

constexpr int kRefactorInterval = 64;

}  // namespace

ModelGeometry model_geometry(const ModelIndicator& gamma, const Dataset& data,
                             const Hyperparameters& hp) {
  if (static_cast<Eigen::Index>(gamma.size()) != data.p())
    throw PreconditionError("gamma length does not match p");
  Eigen::MatrixXd a = data.x.transpose() * data.x;
  for (Eigen::Index j = 0; j < data.p(); ++j)
    a(j, j) += diag_entry(gamma[j], hp);
  const Eigen::MatrixXd chol = chol_with_jitter(a);
  const Eigen::VectorXd xty = data.x.transpose() * data.y;
  const ScoreTerms terms = score_terms(chol, xty);
  ModelGeometry g;
  g.log_det_L = terms.log_det_L;
  g.mu = chol.triangularView<Eigen::Lower>().transpose().solve(
      chol.triangularView<Eigen::Lower>().solve(xty));
  g.r = 0.5 * (data.y.squaredNorm() - terms.quad) + hp.b;
  g.L = chol.triangularView<Eigen::Lower>().transpose().solve(
      chol.triangularView<Eigen::Lower>()
          .solve(Eigen::MatrixXd::Identity(data.p(), data.p())));
  return g;
}

double model_log_score(const ModelIndicator& gamma, const Dataset& data,
                       const Eigen::VectorXd& alpha, const Hyperparameters& hp) {
  check_dims(data, alpha);
  if (static_cast<Eigen::Index>(gamma.size()) != data.p())
    throw PreconditionError("gamma length does not match p");
  Eigen::MatrixXd a = data.x.transpose() * data.x;
  for (Eigen::Index j = 0; j < data.p(); ++j)
    a(j, j) += diag_entry(gamma[j], hp);
  const Eigen::MatrixXd chol = chol_with_jitter(a);
  const ScoreTerms terms = score_terms(chol, data.x.transpose() * data.y);
  return assemble_score(gamma, alpha, hp, terms, data.y.squaredNorm(), data.n());
}

EnumeratedPosterior enumerate_posterior(const Dataset& data,
                                        const Eigen::VectorXd& alpha,
                                        const Hyperparameters& hp,
                                        std::uint64_t cap) {
  check_dims(data, alpha);
  const auto p = data.p();
  if (p >= 63 || (1ULL << p) > cap)
    throw CapacityError("2^p exceeds the enumeration cap of " + std::to_string(cap) +
                        " models; use the Gibbs sampler for p = " + std::to_string(p));
  const std::uint64_t count = 1ULL << p;
  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;
  const double yty = data.y.squaredNorm();

  Eigen::VectorXd scores(static_cast<Eigen::Index>(count));
  ModelIndicator gamma(p, 0);

  auto base_matrix = [&](const ModelIndicator& g) {
    Eigen::MatrixXd a = xtx;
    for (Eigen::Index j = 0; j < p; ++j) a(j, j) += diag_entry(g[j], hp);
    return a;
  };

  if (gray_code_safe(p, hp)) {
    // Gray-code scan: one bit flip per model, rank-1 factor update, with a
    // periodic refactorization to bound drift.
    Eigen::MatrixXd chol = chol_with_jitter(base_matrix(gamma));
    std::uint64_t mask = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (i > 0) {
        const int j = std::countr_zero(i);
        mask ^= 1ULL << j;
        gamma[j] ^= 1;
        const double delta = diag_entry(gamma[j], hp) - diag_entry(gamma[j] ^ 1, hp);
        bool ok = true;
        if (i % kRefactorInterval == 0) {
          ok = false;
        } else {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
          v(j) = std::sqrt(std::abs(delta));
          if (delta >= 0) {
            chol_update(chol, v, j);
          } else {
            ok = chol_downdate(chol, v, j);
          }
        }
        if (!ok) chol = chol_with_jitter(base_matrix(gamma));
      }
      const ScoreTerms terms = score_terms(chol, xty);
      scores(static_cast<Eigen::Index>(mask)) =
          assemble_score(gamma, alpha, hp, terms, yty, data.n());
    }
  } else {
    for (std::uint64_t m = 0; m < count; ++m) {
      for (Eigen::Index j = 0; j < p; ++j) gamma[j] = (m >> j) & 1;
      const Eigen::MatrixXd chol = chol_with_jitter(base_matrix(gamma));
      const ScoreTerms terms = score_terms(chol, xty);
      scores(static_cast<Eigen::Index>(m)) =
          assemble_score(gamma, alpha, hp, terms, yty, data.n());
    }
  }

  const double norm = log_sum_exp({scores.data(), static_cast<std::size_t>(scores.size())});
  EnumeratedPosterior out;
  out.log_prob = scores.array() - norm;
  return out;
}

double model_odds(const ModelIndicator& gamma_a, const ModelIndicator& gamma_b,
                  const Dataset& data, const Eigen::VectorXd& alpha,
                  const Hyperparameters& hp) {
  if (gamma_a.size() != gamma_b.size())
    throw PreconditionError("model indicators have different lengths");
  check_dims(data, alpha);
  const ModelGeometry ga = model_geometry(gamma_a, data, hp);
  const ModelGeometry gb = model_geometry(gamma_b, data, hp);
  double log_odds = 0.0;
  long dk = 0;
  for (std::size_t j = 0; j < gamma_a.size(); ++j) {
    const double logit = std::log(alpha(static_cast<Eigen::Index>(j))) -
                         std::log1p(-alpha(static_cast<Eigen::Index>(j)));
    log_odds += static_cast<double>(gamma_a[j] - gamma_b[j]) * logit;
    dk += gamma_a[j] - gamma_b[j];
  }
  log_odds += static_cast<double>(dk) * (std::log(hp.tau0) - std::log(hp.tau1));
  log_odds += 0.5 * (ga.log_det_L - gb.log_det_L);
  log_odds += (0.5 * static_cast<double>(data.n()) + hp.a) * (std::log(gb.r) - std::log(ga.r));
  return std::exp(log_odds);
}

Eigen::VectorXd marginal_inclusion_exact(const Dataset& data,
                                         const Eigen::VectorXd& alpha,
                                         const Hyperparameters& hp,
                                         std::uint64_t cap) {
  const EnumeratedPosterior post = enumerate_posterior(data, alpha, hp, cap);
  const auto p = data.p();
  Eigen::VectorXd incl = Eigen::VectorXd::Zero(p);
  for (Eigen::Index m = 0; m < post.log_prob.size(); ++m) {
    const double pr = std::exp(post.log_prob(m));
    for (Eigen::Index j = 0; j < p; ++j)
      if ((static_cast<std::uint64_t>(m) >> j) & 1ULL) incl(j) += pr;
  }
  return incl;
}

TMixture beta_posterior_mixture_exact(const Dataset& data,
                                      const Eigen::VectorXd& alpha,
                                      const Hyperparameters& hp,
                                      std::uint64_t cap) {
  const EnumeratedPosterior post = enumerate_posterior(data, alpha, hp, cap);
  const auto p = data.p();
  const double dof = static_cast<double>(data.n()) + 2.0 * hp.a;
  TMixture mix;
  mix.components.reserve(static_cast<std::size_t>(post.log_prob.size()));
  for (Eigen::Index m = 0; m < post.log_prob.size(); ++m) {
    TMixtureComponent c;
    c.gamma.resize(p);
    for (Eigen::Index j = 0; j < p; ++j)
      c.gamma[j] = static_cast<int>((static_cast<std::uint64_t>(m) >> j) & 1ULL);
    const ModelGeometry g = model_geometry(c.gamma, data, hp);
    c.weight = std::exp(post.log_prob(m));
    c.mean = g.mu;
    c.scale = (2.0 * g.r / dof) * g.L;
    c.dof = dof;
    mix.components.push_back(std::move(c));
  }
  return mix;
}

Eigen::VectorXd TMixture::posterior_mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(components.front().mean.size());
  for (const auto& c : components) m += c.weight * c.mean;
  return m;
}

double TMixture::log_density(const Eigen::VectorXd& beta) const {
  const auto p = beta.size();
  std::vector<double> terms;
  terms.reserve(components.size());
  for (const auto& c : components) {
    const Eigen::LLT<Eigen::MatrixXd> llt(c.scale);
    if (llt.info() != Eigen::Success)
      throw NumericError("t-mixture scale matrix is not positive definite");
    const Eigen::MatrixXd lower = llt.matrixL();
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    const Eigen::VectorXd z =
        lower.triangularView<Eigen::Lower>().solve(beta - c.mean);
    const double quad = z.squaredNorm();
    const double dp = static_cast<double>(p);
    const double log_pdf = std::lgamma(0.5 * (c.dof + dp)) - std::lgamma(0.5 * c.dof) -
                           0.5 * dp * std::log(c.dof * 3.14159265358979323846) -
                           0.5 * log_det -
                           0.5 * (c.dof + dp) * std::log1p(quad / c.dof);
    terms.push_back(std::log(c.weight) + log_pdf);
  }
  return log_sum_exp({terms.data(), terms.size()});
}

std::pair<double, double> verify_product_expansion(const Eigen::VectorXd& beta,
                                                   const Eigen::VectorXd& alpha,
                                                   double sigma2,
                                                   const Hyperparameters& hp) {
  const auto p = beta.size();
  if (p > 12) throw CapacityError("product expansion check limited to p <= 12");
  if (alpha.size() != p) throw PreconditionError("alpha length does not match beta");

  double lhs = 0.0;
  for (Eigen::Index j = 0; j < p; ++j)
    lhs += marginal_prior_log_density(beta(j), alpha(j), sigma2, hp);

  // rhs: expanded form with one term per subset of covariates.
  const double prec_gap = 1.0 / (hp.tau0 * hp.tau0) - 1.0 / (hp.tau1 * hp.tau1);
  Eigen::VectorXd contrib(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    contrib(j) = std::log(hp.tau1 / hp.tau0) + std::log1p(-alpha(j)) -
                 std::log(alpha(j)) - beta(j) * beta(j) / (2.0 * sigma2) * prec_gap;
  }
  const std::uint64_t count = 1ULL << p;
  std::vector<double> terms(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    double t = 0.0;
    for (Eigen::Index j = 0; j < p; ++j)
      if ((m >> j) & 1ULL) t += contrib(j);
    terms[m] = t;
  }
  double rhs = -0.5 * static_cast<double>(p) *
                   (kLogTwoPi + std::log(sigma2 * hp.tau1 * hp.tau1)) -
               beta.squaredNorm() / (2.0 * sigma2 * hp.tau1 * hp.tau1);
  for (Eigen::Index j = 0; j < p; ++j) rhs += std::log(alpha(j));
  rhs += log_sum_exp({terms.data(), terms.size()});
  return {lhs, rhs};
}

}  // namespace cbvs
