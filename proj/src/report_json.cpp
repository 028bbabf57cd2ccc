#include "cbvs/report_json.hpp"

#include <nlohmann/json.hpp>

namespace cbvs {
namespace {

nlohmann::ordered_json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::ordered_json confusion_to_json(const ConfusionCounts& c) {
  return {{"active_determinate", c.active_determinate},
          {"active_indeterminate", c.active_indeterminate},
          {"false_active_determinate", c.false_active_determinate},
          {"false_active_indeterminate", c.false_active_indeterminate},
          {"inactive_determinate", c.inactive_determinate},
          {"inactive_indeterminate", c.inactive_indeterminate},
          {"false_inactive_determinate", c.false_inactive_determinate},
          {"false_inactive_indeterminate", c.false_inactive_indeterminate}};
}

}  // namespace

std::string report_to_json(const SelectionReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["source"] = report.source;

  nlohmann::ordered_json covs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.covariates.size(); ++i) {
    const auto& c = report.covariates[i];
    covs.push_back({{"index", static_cast<int>(i)},
                    {"status", to_string(c.status)},
                    {"odds_lower", c.odds.lower},
                    {"odds_upper", c.odds.upper}});
  }
  j["covariates"] = covs;

  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  for (const auto& f : report.fits) {
    nlohmann::ordered_json fj;
    fj["alpha"] = vec_to_json(f.alpha);
    fj["active"] = f.active;
    fj["squared_error"] = f.squared_error;
    fj["posterior_mean"] = vec_to_json(f.posterior_mean);
    if (f.delta) fj["delta"] = *f.delta;
    fits.push_back(std::move(fj));
  }
  j["fits"] = fits;

  j["optimistic_config"] = report.optimistic_config;
  j["pessimistic_config"] = report.pessimistic_config;
  j["min_squared_error"] = report.min_squared_error;
  j["max_squared_error"] = report.max_squared_error;
  j["indeterminacy"] = report.indeterminacy;
  j["counts"] = {{"active", report.count(Status::Active)},
                 {"inactive", report.count(Status::Inactive)},
                 {"indeterminate", report.count(Status::Indeterminate)}};
  if (report.delta_optimistic) j["delta_optimistic"] = *report.delta_optimistic;
  if (report.delta_pessimistic) j["delta_pessimistic"] = *report.delta_pessimistic;
  if (report.confusion_optimistic)
    j["confusion_optimistic"] = confusion_to_json(*report.confusion_optimistic);
  if (report.confusion_pessimistic)
    j["confusion_pessimistic"] = confusion_to_json(*report.confusion_pessimistic);

  return j.dump(2) + "\n";
}

}  // namespace cbvs
