#include "cbvs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "cbvs/errors.hpp"
#include "cbvs/math.hpp"
#include "cbvs/rng.hpp"

namespace cbvs {

void SynthSpec::validate() const {
  if (n < 1 || p < 1) throw PreconditionError("synthetic spec requires n, p >= 1");
  if (n_active < 0 || n_active > p)
    throw PreconditionError("n_active must lie in [0, p]");
  if (!(corr_base >= 0.0 && corr_base < 1.0))
    throw PreconditionError("corr_base must lie in [0, 1)");
  if (!(noise_var > 0)) throw PreconditionError("noise_var must be positive");
  if (!(0 < coef_low && coef_low <= coef_high))
    throw PreconditionError("need 0 < coef_low <= coef_high");
}

SyntheticData generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Rng row_rng = rng.stream(1);
  Rng coef_rng = rng.stream(2);
  Rng noise_rng = rng.stream(3);

  // AR-style correlation corr_base^|i-j| via its Cholesky factor.
  Eigen::MatrixXd sigma(spec.p, spec.p);
  for (Eigen::Index i = 0; i < spec.p; ++i)
    for (Eigen::Index j = 0; j < spec.p; ++j)
      sigma(i, j) = std::pow(spec.corr_base, std::abs(static_cast<double>(i - j)));
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();

  SyntheticData out;
  out.data.x.resize(spec.n, spec.p);
  Eigen::VectorXd z(spec.p);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    for (Eigen::Index j = 0; j < spec.p; ++j) z(j) = row_rng.normal();
    out.data.x.row(i) = (chol * z).transpose();
  }

  // uniformly chosen support, magnitudes U[coef_low, coef_high], random sign
  std::vector<int> order(static_cast<std::size_t>(spec.p));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto k = static_cast<std::size_t>(coef_rng.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(k, i - 1)]);
  }
  out.active_indices.assign(order.begin(), order.begin() + spec.n_active);
  std::sort(out.active_indices.begin(), out.active_indices.end());

  out.beta_true = Eigen::VectorXd::Zero(spec.p);
  for (int j : out.active_indices) {
    const double mag = spec.coef_low + (spec.coef_high - spec.coef_low) * coef_rng.uniform();
    const double sign = coef_rng.bernoulli(0.5) ? 1.0 : -1.0;
    out.beta_true(j) = sign * mag;
  }

  out.data.y.resize(spec.n);
  const double noise_sd = std::sqrt(spec.noise_var);
  for (Eigen::Index i = 0; i < spec.n; ++i)
    out.data.y(i) = out.data.x.row(i) * out.beta_true + noise_sd * noise_rng.normal();
  return out;
}

ElicitationResult elicit_alpha_interval(const Dataset& data, double p_low,
                                        double p_high, double ridge_penalty) {
  data.validate();
  if (!(0 < p_low && p_low < p_high && p_high < 1))
    throw PreconditionError("need 0 < p_low < p_high < 1");
  if (!(ridge_penalty > 0)) throw PreconditionError("ridge penalty must be positive");
  const auto n = data.n();
  const auto p = data.p();

  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  Eigen::MatrixXd m = xtx;
  m.diagonal().array() += ridge_penalty;
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError("singular ridge system in elicitation");
  const Eigen::MatrixXd minv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd coef = minv * (data.x.transpose() * data.y);

  const Eigen::VectorXd resid = data.y - data.x * coef;
  const double tr_hat = (data.x * minv * data.x.transpose()).trace();
  const double dof = std::max(1.0, static_cast<double>(n) - tr_hat);
  const double s2 = resid.squaredNorm() / dof;
  // Ridge posterior covariance. The "sandwich" form s2 Minv XtX Minv is
  // asymptotically calibrated, but for p >= n calibrated p-values mark about
  // t*p null covariates at threshold t, which defeats the purpose of the
  // elicitation; this conservative form stays informative when p >= n.
  const Eigen::MatrixXd cov = s2 * minv;

  std::vector<double> pvals(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(cov(j, j), 1e-300));
    const double zstat = std::abs(coef(j)) / se;
    pvals[static_cast<std::size_t>(j)] = 2.0 * (1.0 - normal_cdf(zstat, 0.0, 1.0));
  }

  auto count_below = [&pvals](double t) {
    return static_cast<int>(std::count_if(pvals.begin(), pvals.end(),
                                          [t](double v) { return v < t; }));
  };
  const int k_low = count_below(p_low);
  const int k_high = count_below(p_high);
  const double margin = 1.0 / (2.0 * static_cast<double>(p));
  auto clamp = [margin](double v) {
    return std::min(std::max(v, margin), 1.0 - margin);
  };

  ElicitationResult out;
  out.alpha_lo = clamp(static_cast<double>(k_low) / static_cast<double>(p));
  out.alpha_hi = clamp(static_cast<double>(k_high) / static_cast<double>(p));
  out.counts_at_thresholds[p_low] = k_low;
  out.counts_at_thresholds[p_high] = k_high;
  return out;
}

std::vector<int> screen_covariates(const Dataset& data, Eigen::Index keep) {
  data.validate();
  if (keep < 0 || keep > data.p())
    throw PreconditionError("keep must lie in [0, p]");
  const auto p = data.p();
  const double ym = data.y.mean();
  const Eigen::ArrayXd yc = data.y.array() - ym;
  const double ynorm = std::sqrt(yc.square().sum());
  std::vector<std::pair<double, int>> ranked(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::ArrayXd xc = data.x.col(j).array() - data.x.col(j).mean();
    const double denom = std::sqrt(xc.square().sum()) * ynorm;
    const double cor = denom > 0 ? std::abs((xc * yc).sum() / denom) : 0.0;
    ranked[static_cast<std::size_t>(j)] = {cor, static_cast<int>(j)};
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(keep));
  for (Eigen::Index i = 0; i < keep; ++i)
    out.push_back(ranked[static_cast<std::size_t>(i)].second);
  return out;
}

const std::map<std::string, AlphaPreset>& alpha_presets() {
  static const std::map<std::string, AlphaPreset> presets = {
      {"diabetes", {0.2, 0.5}},       {"gaia", {0.0625, 0.1875}},
      {"lymphoma", {0.1, 0.15}},      {"nearVacuous", {0.05, 0.95}},
      {"synthetic1", {0.05, 0.12}},   {"synthetic2", {0.08, 0.22}},
      {"synthetic3", {0.10, 0.33}},   {"synthetic4", {0.16, 0.34}},
  };
  return presets;
}

}  // namespace cbvs
