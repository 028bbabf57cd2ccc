#include "cbvs/gibbs.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Cholesky>

#include "cbvs/densities.hpp"
#include "cbvs/errors.hpp"
#include "cbvs/math.hpp"

namespace cbvs {

Eigen::VectorXd ChainOutput::inclusion_prob() const {
  if (kept == 0) return Eigen::VectorXd::Zero(inclusion_counts.size());
  return inclusion_counts.cast<double>() / static_cast<double>(kept);
}

Eigen::VectorXd ChainOutput::inclusion_odds() const {
  const auto p = inclusion_counts.size();
  Eigen::VectorXd odds(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double c = static_cast<double>(inclusion_counts(j));
    odds(j) = (c + 0.5) / (static_cast<double>(kept) - c + 0.5);
  }
  return odds;
}

Eigen::VectorXd ChainOutput::beta_mean() const {
  if (kept == 0) return Eigen::VectorXd::Zero(beta_sum.size());
  return beta_sum / static_cast<double>(kept);
}

void ChainOutput::merge(const ChainOutput& other) {
  kept += other.kept;
  inclusion_counts += other.inclusion_counts;
  beta_sum += other.beta_sum;
  beta_sum_sq += other.beta_sum_sq;
  sigma2_sum += other.sigma2_sum;
  sigma2_sum_sq += other.sigma2_sum_sq;
}

GibbsSampler::GibbsSampler(const Dataset& data, Eigen::VectorXd alpha,
                           Hyperparameters hp)
    : data_(data), alpha_(std::move(alpha)), hp_(hp) {
  data_.validate();
  if (alpha_.size() != data_.p())
    throw PreconditionError("alpha vector length does not match p");
  hp_.validate();
  xtx_ = data_.x.transpose() * data_.x;
  xty_ = data_.x.transpose() * data_.y;
  yty_ = data_.y.squaredNorm();
}

Eigen::VectorXd GibbsSampler::sample_beta(const GibbsState& state, Rng& rng) const {
  const auto p = data_.p();
  Eigen::MatrixXd a = xtx_;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double tau = state.gamma[j] ? hp_.tau1 : hp_.tau0;
    a(j, j) += 1.0 / (tau * tau);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    std::string bits;
    for (int g : state.gamma) bits += g ? '1' : '0';
    throw NumericError("Cholesky failure in coefficient draw, gamma = " + bits);
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::VectorXd mu = llt.solve(xty_);
  Eigen::VectorXd z(p);
  for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
  // beta = mu + sigma * L^{-T} z gives covariance sigma2 (x'x + D)^{-1}
  const Eigen::VectorXd shift =
      lower.triangularView<Eigen::Lower>().transpose().solve(z);
  return mu + std::sqrt(state.sigma2) * shift;
}

double GibbsSampler::inclusion_conditional(const GibbsState& state,
                                           Eigen::Index j) const {
  const double l1 = std::log(state.q(j)) +
                    spike_slab_log_density(state.beta(j), 1, state.sigma2, hp_);
  const double l0 = std::log1p(-state.q(j)) +
                    spike_slab_log_density(state.beta(j), 0, state.sigma2, hp_);
  return sigmoid(l1 - l0);
}

std::vector<int> GibbsSampler::sample_gamma(const GibbsState& state, Rng& rng) const {
  const auto p = data_.p();
  std::vector<int> gamma(p);
  for (Eigen::Index j = 0; j < p; ++j)
    gamma[j] = rng.bernoulli(inclusion_conditional(state, j)) ? 1 : 0;
  return gamma;
}

Eigen::VectorXd GibbsSampler::sample_q(const GibbsState& state, Rng& rng) const {
  const auto p = data_.p();
  Eigen::VectorXd q(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    q(j) = rng.beta(hp_.s * alpha_(j) + state.gamma[j],
                    hp_.s * (1.0 - alpha_(j)) + 1.0 - state.gamma[j]);
  }
  return q;
}

double GibbsSampler::sample_sigma2(const GibbsState& state, Rng& rng) const {
  const auto n = data_.n();
  const auto p = data_.p();
  const double rss = (data_.y - data_.x * state.beta).squaredNorm();
  double prior_quad = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double tau = state.gamma[j] ? hp_.tau1 : hp_.tau0;
    prior_quad += state.beta(j) * state.beta(j) / (tau * tau);
  }
  const double shape = hp_.a + 0.5 * static_cast<double>(p + n);
  const double rate = hp_.b + 0.5 * rss + 0.5 * prior_quad;
  if (!(rate > 0)) throw NumericError("non-positive rate in variance draw");
  return rng.inverse_gamma(shape, rate);
}

GibbsState GibbsSampler::initial_state() const {
  GibbsState st;
  st.beta = Eigen::VectorXd::Zero(data_.p());
  st.gamma.assign(data_.p(), 0);
  st.q = alpha_;
  const double ym = data_.y.mean();
  st.sigma2 = (data_.y.array() - ym).square().sum() /
              std::max<double>(1.0, static_cast<double>(data_.n() - 1));
  if (!(st.sigma2 > 0)) st.sigma2 = 1.0;
  return st;
}

void GibbsSampler::collapsed_coordinate_sweep(GibbsState& state, Rng& rng) const {
  // Blocked update of (gamma_j, beta_j) given everything else: gamma_j is
  // drawn with beta_j integrated out analytically, then beta_j from its exact
  // scalar conditional. Conditioning gamma_j on the current beta_j instead
  // (as sample_gamma does) leaves the chain stuck in whichever component it
  // occupies once tau0 is tiny: the escape probability scales with tau0/tau1.
  const auto p = data_.p();
  Eigen::VectorXd resid = data_.y - data_.x * state.beta;
  const double inv_t0 = 1.0 / (hp_.tau0 * hp_.tau0);
  const double inv_t1 = 1.0 / (hp_.tau1 * hp_.tau1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double c = xtx_(j, j);
    // x_j' (y - x beta + x_j beta_j): least-squares signal for beta_j alone
    const double s = data_.x.col(j).dot(resid) + c * state.beta(j);
    const double prec0 = c + inv_t0;
    const double prec1 = c + inv_t1;
    const double log_w0 = -0.5 * std::log1p(hp_.tau0 * hp_.tau0 * c) +
                          s * s / (2.0 * state.sigma2 * prec0);
    const double log_w1 = -0.5 * std::log1p(hp_.tau1 * hp_.tau1 * c) +
                          s * s / (2.0 * state.sigma2 * prec1);
    const double p1 = sigmoid(std::log(state.q(j)) - std::log1p(-state.q(j)) +
                              log_w1 - log_w0);
    const int g = rng.bernoulli(p1) ? 1 : 0;
    const double prec = g ? prec1 : prec0;
    const double draw = s / prec + std::sqrt(state.sigma2 / prec) * rng.normal();
    resid += data_.x.col(j) * (state.beta(j) - draw);
    state.gamma[j] = g;
    state.beta(j) = draw;
  }
}

GibbsState GibbsSampler::scan(GibbsState state, Rng& rng) const {
  state.beta = sample_beta(state, rng);
  collapsed_coordinate_sweep(state, rng);
  state.q = sample_q(state, rng);
  state.sigma2 = sample_sigma2(state, rng);
  return state;
}

ChainOutput GibbsSampler::run_chain(int iterations, int burnin, int thin,
                                    std::uint64_t seed, std::ostream* trace) const {
  if (burnin >= iterations)
    throw PreconditionError("burnin must be smaller than iterations");
  if (thin < 1) throw PreconditionError("thin must be >= 1");
  const auto p = data_.p();
  ChainOutput out;
  out.inclusion_counts = Eigen::VectorXi::Zero(p);
  out.beta_sum = Eigen::VectorXd::Zero(p);
  out.beta_sum_sq = Eigen::VectorXd::Zero(p);
  out.seed = seed;
  out.iterations = iterations;
  out.burnin = burnin;
  out.thin = thin;

  if (trace) {
    *trace << "iteration,sigma2";
    for (Eigen::Index j = 0; j < p; ++j) *trace << ",gamma" << (j + 1);
    for (Eigen::Index j = 0; j < p; ++j) *trace << ",beta" << (j + 1);
    *trace << "\n" << std::setprecision(17);
  }

  Rng rng = Rng(seed).stream(0);
  GibbsState state = initial_state();
  for (int it = 0; it < iterations; ++it) {
    try {
      state = scan(std::move(state), rng);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at iteration " + std::to_string(it));
    }
    if (it < burnin || (it - burnin) % thin != 0) continue;
    ++out.kept;
    for (Eigen::Index j = 0; j < p; ++j) out.inclusion_counts(j) += state.gamma[j];
    out.beta_sum += state.beta;
    out.beta_sum_sq += state.beta.cwiseProduct(state.beta);
    out.sigma2_sum += state.sigma2;
    out.sigma2_sum_sq += state.sigma2 * state.sigma2;
    if (trace) {
      *trace << it << ',' << state.sigma2;
      for (Eigen::Index j = 0; j < p; ++j) *trace << ',' << state.gamma[j];
      for (Eigen::Index j = 0; j < p; ++j) *trace << ',' << state.beta(j);
      *trace << "\n";
    }
  }
  return out;
}

ChainOutput run_chain(const Dataset& data, const Eigen::VectorXd& alpha,
                      const Hyperparameters& hp, int iterations, int burnin,
                      int thin, std::uint64_t seed, std::ostream* trace) {
  return GibbsSampler(data, alpha, hp).run_chain(iterations, burnin, thin, seed, trace);
}

SweepResult sensitivity_sweep(const Dataset& data, const AlphaBox& box,
                              const Hyperparameters& hp, const SweepSchedule& schedule,
                              const ChainConfig& chain_cfg, std::uint64_t seed) {
  box.validate();
  if (box.p() != data.p())
    throw PreconditionError("alpha box dimension does not match p");

  std::vector<Eigen::VectorXd> alphas;
  if (box.degenerate()) {
    alphas.push_back(box.lo);
  } else if (schedule.mode == SweepSchedule::Mode::Endpoints) {
    alphas.push_back(box.lo);
    alphas.push_back(box.hi);
  } else {
    const int g = std::max(2, schedule.grid_points);
    for (int i = 0; i < g; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(g - 1);
      alphas.push_back(box.lo + t * (box.hi - box.lo));
    }
  }

  SweepResult result;
  result.configs.resize(alphas.size());
  const Rng master(seed);

  // Configurations and chains are independent jobs on substreams of the
  // master seed; results do not depend on scheduling order.
  auto run_config = [&](std::size_t c) {
    GibbsSampler sampler(data, alphas[c], hp);
    ChainOutput merged;
    for (int chain = 0; chain < chain_cfg.chains; ++chain) {
      const std::uint64_t sub =
          master.stream(static_cast<std::uint64_t>(c) * 1000 + chain).seed();
      ChainOutput one = sampler.run_chain(chain_cfg.iterations, chain_cfg.burnin,
                                          chain_cfg.thin, sub);
      if (chain == 0)
        merged = std::move(one);
      else
        merged.merge(one);
    }
    SweepConfigResult& cfg = result.configs[c];
    cfg.alpha = alphas[c];
    cfg.odds = merged.inclusion_odds();
    for (Eigen::Index j = 0; j < cfg.odds.size(); ++j)
      if (cfg.odds(j) > 1.0) cfg.active_set.push_back(static_cast<int>(j));
    cfg.chain = std::move(merged);
  };

  const unsigned hw = std::thread::hardware_concurrency();
  if (alphas.size() > 1 && hw > 1) {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    const std::size_t n_workers = std::min<std::size_t>(alphas.size(), hw);
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < alphas.size();
             c = next.fetch_add(1))
          run_config(c);
      });
    }
    for (auto& t : workers) t.join();
  } else {
    for (std::size_t c = 0; c < alphas.size(); ++c) run_config(c);
  }

  const auto p = data.p();
  result.odds_lower = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  result.odds_upper = Eigen::VectorXd::Zero(p);
  for (const auto& cfg : result.configs) {
    result.odds_lower = result.odds_lower.cwiseMin(cfg.odds);
    result.odds_upper = result.odds_upper.cwiseMax(cfg.odds);
  }
  return result;
}

}  // namespace cbvs
