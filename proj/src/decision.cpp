#include "cbvs/decision.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cbvs/errors.hpp"

namespace cbvs {

std::vector<int> active_set(const Eigen::VectorXd& inclusion_odds) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < inclusion_odds.size(); ++j)
    if (inclusion_odds(j) > 1.0) out.push_back(static_cast<int>(j));
  return out;
}

double refit_and_error(const Dataset& data, const std::vector<int>& active,
                       const Eigen::VectorXd& posterior_mean_restricted) {
  if (active.empty()) return data.y.squaredNorm();
  if (posterior_mean_restricted.size() != static_cast<Eigen::Index>(active.size()))
    throw PreconditionError("restricted posterior mean length does not match active set");
  Eigen::VectorXd fitted = Eigen::VectorXd::Zero(data.n());
  for (std::size_t i = 0; i < active.size(); ++i) {
    const int j = active[i];
    if (j < 0 || j >= data.p())
      throw PreconditionError("active index out of range: " + std::to_string(j));
    fitted += data.x.col(j) * posterior_mean_restricted(static_cast<Eigen::Index>(i));
  }
  return (data.y - fitted).squaredNorm();
}

double delta_beta(const Eigen::VectorXd& posterior_mean,
                  const std::vector<int>& active,
                  const Eigen::VectorXd& beta_true) {
  if (posterior_mean.size() != beta_true.size())
    throw PreconditionError("posterior mean and true coefficient lengths differ");
  std::vector<char> mask(static_cast<std::size_t>(beta_true.size()), 0);
  for (int j : active) mask[static_cast<std::size_t>(j)] = 1;
  double d = 0.0;
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    const double est = mask[static_cast<std::size_t>(j)] ? posterior_mean(j) : 0.0;
    const double e = est - beta_true(j);
    d += e * e;
  }
  return d;
}

double model_indeterminacy(double min_err, double max_err) {
  if (max_err < min_err) throw PreconditionError("max_err < min_err");
  if (max_err == 0.0) return 0.0;
  return (max_err - min_err) / max_err;
}

int SelectionReport::count(Status s) const {
  return static_cast<int>(std::count_if(
      covariates.begin(), covariates.end(),
      [s](const CovariateDecision& c) { return c.status == s; }));
}

ConfusionCounts confusion_counts(const SelectionReport& report,
                                 const ConfigFit& fit,
                                 const Eigen::VectorXd& beta_true) {
  ConfusionCounts cc;
  std::vector<char> in_fit(static_cast<std::size_t>(beta_true.size()), 0);
  for (int j : fit.active) in_fit[static_cast<std::size_t>(j)] = 1;
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    const bool truly_active = beta_true(j) != 0.0;
    const Status st = report.covariates[static_cast<std::size_t>(j)].status;
    const bool fit_active = in_fit[static_cast<std::size_t>(j)] != 0;
    if (st == Status::Active) {
      ++cc.active_determinate;
      if (!truly_active) ++cc.false_active_determinate;
    } else if (st == Status::Inactive) {
      ++cc.inactive_determinate;
      if (truly_active) ++cc.false_inactive_determinate;
    } else if (fit_active) {
      ++cc.active_indeterminate;
      if (!truly_active) ++cc.false_active_indeterminate;
    } else {
      ++cc.inactive_indeterminate;
      if (truly_active) ++cc.false_inactive_indeterminate;
    }
  }
  return cc;
}

SelectionReport build_report(const Dataset& data, const SweepResult& sweep,
                             std::string source, const Eigen::VectorXd* beta_true) {
  if (sweep.configs.empty()) throw PreconditionError("sweep has no configurations");
  SelectionReport report;
  report.source = std::move(source);

  const auto p = data.p();
  report.covariates.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    CovariateDecision& d = report.covariates[static_cast<std::size_t>(j)];
    d.odds = OddsInterval{sweep.odds_lower(j), sweep.odds_upper(j)};
    d.status = classify(d.odds);
  }

  double best = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < sweep.configs.size(); ++c) {
    const auto& cfg = sweep.configs[c];
    ConfigFit fit;
    fit.alpha = cfg.alpha;
    fit.active = cfg.active_set;
    fit.posterior_mean = cfg.chain.beta_mean();
    Eigen::VectorXd restricted(static_cast<Eigen::Index>(fit.active.size()));
    for (std::size_t i = 0; i < fit.active.size(); ++i)
      restricted(static_cast<Eigen::Index>(i)) = fit.posterior_mean(fit.active[i]);
    fit.squared_error = refit_and_error(data, fit.active, restricted);
    if (beta_true) fit.delta = delta_beta(fit.posterior_mean, fit.active, *beta_true);
    if (fit.squared_error < best) {
      best = fit.squared_error;
      report.optimistic_config = static_cast<int>(c);
    }
    if (fit.squared_error > worst) {
      worst = fit.squared_error;
      report.pessimistic_config = static_cast<int>(c);
    }
    report.fits.push_back(std::move(fit));
  }
  report.min_squared_error = best;
  report.max_squared_error = worst;
  report.indeterminacy = model_indeterminacy(best, worst);
  if (beta_true) {
    const auto& opt = report.fits[static_cast<std::size_t>(report.optimistic_config)];
    const auto& pes = report.fits[static_cast<std::size_t>(report.pessimistic_config)];
    report.delta_optimistic = opt.delta;
    report.delta_pessimistic = pes.delta;
    report.confusion_optimistic = confusion_counts(report, opt, *beta_true);
    report.confusion_pessimistic = confusion_counts(report, pes, *beta_true);
  }
  return report;
}

std::string format_report(const SelectionReport& report) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "covariate  odds_lower   odds_upper   status\n";
  for (std::size_t j = 0; j < report.covariates.size(); ++j) {
    const auto& c = report.covariates[j];
    os << std::setw(9) << (j + 1) << "  " << std::setw(11) << c.odds.lower << "  "
       << std::setw(11) << c.odds.upper << "  " << to_string(c.status) << "\n";
  }
  os << "\nactive " << report.count(Status::Active) << ", inactive "
     << report.count(Status::Inactive) << ", indeterminate "
     << report.count(Status::Indeterminate) << "\n";
  os << "min squared error " << report.min_squared_error << " (config "
     << report.optimistic_config << "), max " << report.max_squared_error
     << " (config " << report.pessimistic_config << "), indeterminacy "
     << report.indeterminacy << "\n";
  if (report.delta_optimistic)
    os << "delta(beta): optimistic " << *report.delta_optimistic << ", pessimistic "
       << *report.delta_pessimistic << "\n";
  auto conf = [&os](const char* tag, const ConfusionCounts& cc) {
    os << tag << ": Act " << cc.active_determinate << "-" << cc.active_indeterminate
       << "  FA " << cc.false_active_determinate << "-" << cc.false_active_indeterminate
       << "  Inact " << cc.inactive_determinate << "-" << cc.inactive_indeterminate
       << "  FI " << cc.false_inactive_determinate << "-"
       << cc.false_inactive_indeterminate << "\n";
  };
  if (report.confusion_optimistic) conf("confusion (optimistic)", *report.confusion_optimistic);
  if (report.confusion_pessimistic) conf("confusion (pessimistic)", *report.confusion_pessimistic);
  return os.str();
}

}  // namespace cbvs
