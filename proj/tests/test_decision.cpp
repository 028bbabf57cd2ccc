#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbvs/decision.hpp"
#include "cbvs/errors.hpp"
#include "golden_values.hpp"
#include "test_util.hpp"

using namespace cbvs;

namespace {

/// Deterministic sweep stub: one config per odds vector, coefficient means fixed.
SweepResult stub_sweep(const std::vector<Eigen::VectorXd>& odds,
                       const Eigen::VectorXd& beta_mean) {
  SweepResult sweep;
  const Eigen::Index p = beta_mean.size();
  for (std::size_t c = 0; c < odds.size(); ++c) {
    SweepConfigResult cfg;
    cfg.alpha = Eigen::VectorXd::Constant(p, 0.2 + 0.1 * static_cast<double>(c));
    cfg.odds = odds[c];
    for (Eigen::Index j = 0; j < p; ++j)
      if (cfg.odds(j) > 1.0) cfg.active_set.push_back(static_cast<int>(j));
    cfg.chain.kept = 1;
    cfg.chain.beta_sum = beta_mean;
    cfg.chain.beta_sum_sq = beta_mean.cwiseProduct(beta_mean);
    cfg.chain.inclusion_counts = Eigen::VectorXi::Zero(p);
    sweep.configs.push_back(std::move(cfg));
  }
  sweep.odds_lower = odds.front();
  sweep.odds_upper = odds.front();
  for (const auto& o : odds) {
    sweep.odds_lower = sweep.odds_lower.cwiseMin(o);
    sweep.odds_upper = sweep.odds_upper.cwiseMax(o);
  }
  return sweep;
}

}  // namespace

TEST_CASE("active set uses a strict threshold") {
  Eigen::VectorXd odds(4);
  odds << 0.5, 1.0, 1.0000001, 30.0;
  CHECK(active_set(odds) == std::vector<int>{2, 3});
  CHECK(active_set(Eigen::VectorXd::Zero(3)).empty());
}

TEST_CASE("refit error matches the frozen oracle") {
  const Dataset d = testutil::golden_dataset();
  Eigen::VectorXd restricted(2);
  restricted << golden::kExactBetaMean[0], golden::kExactBetaMean[1];
  CHECK(refit_and_error(d, {0, 1}, restricted) ==
        doctest::Approx(golden::kRefitErrorAct01).epsilon(1e-12));
  CHECK(refit_and_error(d, {}, Eigen::VectorXd()) ==
        doctest::Approx(d.y.squaredNorm()));
  CHECK_THROWS_AS(refit_and_error(d, {0, 1}, Eigen::VectorXd::Zero(3)),
                  PreconditionError);
  CHECK_THROWS_AS(refit_and_error(d, {99}, Eigen::VectorXd::Zero(1)),
                  PreconditionError);
}

TEST_CASE("coefficient deviation matches the frozen oracle") {
  Eigen::VectorXd mean(golden::kP);
  for (int j = 0; j < golden::kP; ++j)
    mean(j) = golden::kExactBetaMean[static_cast<std::size_t>(j)];
  CHECK(delta_beta(mean, {0, 1}, testutil::golden_beta_true()) ==
        doctest::Approx(golden::kDeltaBetaAct01).epsilon(1e-12));
  // empty selection scores the truth against zero
  CHECK(delta_beta(mean, {}, testutil::golden_beta_true()) ==
        doctest::Approx(testutil::golden_beta_true().squaredNorm()));
}

TEST_CASE("model indeterminacy") {
  CHECK(model_indeterminacy(2.0, 8.0) == doctest::Approx(0.75));
  CHECK(model_indeterminacy(5.0, 5.0) == 0.0);
  CHECK(model_indeterminacy(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(model_indeterminacy(3.0, 2.0), PreconditionError);
}

TEST_CASE("report aggregates a sweep") {
  const Dataset d = testutil::golden_dataset();
  Eigen::VectorXd mean(golden::kP);
  for (int j = 0; j < golden::kP; ++j)
    mean(j) = golden::kExactBetaMean[static_cast<std::size_t>(j)];

  Eigen::VectorXd lo = Eigen::VectorXd::Constant(8, 0.2);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(8, 0.4);
  lo(0) = 5.0;  hi(0) = 9.0;   // active at both extremes
  lo(1) = 14.0; hi(1) = 20.0;  // active
  lo(2) = 0.7;  hi(2) = 1.4;   // straddles one
  const SweepResult sweep = stub_sweep({lo, hi}, mean);

  const Eigen::VectorXd truth = testutil::golden_beta_true();
  const SelectionReport rep = build_report(d, sweep, "exact", &truth);
  CHECK(rep.source == "exact");
  REQUIRE(rep.covariates.size() == 8);
  CHECK(rep.covariates[0].status == Status::Active);
  CHECK(rep.covariates[1].status == Status::Active);
  CHECK(rep.covariates[2].status == Status::Indeterminate);
  CHECK(rep.covariates[3].status == Status::Inactive);
  CHECK(rep.count(Status::Active) == 2);
  CHECK(rep.count(Status::Indeterminate) == 1);
  CHECK(rep.count(Status::Inactive) == 5);

  // config 0 activates {0,1}, config 1 activates {0,1,2}
  REQUIRE(rep.fits.size() == 2);
  CHECK(rep.fits[0].active == std::vector<int>{0, 1});
  CHECK(rep.fits[1].active == std::vector<int>{0, 1, 2});
  CHECK(rep.fits[0].squared_error ==
        doctest::Approx(golden::kRefitErrorAct01).epsilon(1e-12));
  CHECK(rep.min_squared_error <= rep.max_squared_error);
  CHECK(rep.indeterminacy ==
        doctest::Approx((rep.max_squared_error - rep.min_squared_error) /
                        rep.max_squared_error));
  CHECK(rep.fits[0].delta.has_value());
  CHECK(*rep.fits[0].delta == doctest::Approx(golden::kDeltaBetaAct01).epsilon(1e-12));

  // truth has covariates 0 and 1 active
  REQUIRE(rep.confusion_optimistic.has_value());
  const ConfusionCounts& cc = *rep.confusion_optimistic;
  CHECK(cc.active_determinate == 2);
  CHECK(cc.false_active_determinate == 0);
  CHECK(cc.inactive_determinate == 5);
  CHECK(cc.false_inactive_determinate == 0);
  CHECK(cc.active_indeterminate + cc.inactive_indeterminate == 1);
}

TEST_CASE("confusion counts split determinate and indeterminate selections") {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd lo(4), hi(4);
  lo << 2.0, 0.1, 0.5, 0.3;  // active, inactive, indeterminate, indeterminate
  hi << 3.0, 0.2, 1.5, 1.2;
  const Dataset d = [] {
    Dataset t;
    t.x = Eigen::MatrixXd::Identity(4, 4);
    t.y = Eigen::VectorXd::Ones(4);
    return t;
  }();
  const SweepResult sweep = stub_sweep({lo, hi}, mean);
  Eigen::VectorXd truth(4);
  truth << 1.0, 1.0, 0.0, 1.0;
  const SelectionReport rep = build_report(d, sweep, "gibbs", &truth);

  // pessimistic fit (hi endpoint) selects {0, 2, 3}
  const ConfusionCounts cc = confusion_counts(rep, rep.fits[1], truth);
  CHECK(cc.active_determinate == 1);
  CHECK(cc.false_active_determinate == 0);
  CHECK(cc.inactive_determinate == 1);
  CHECK(cc.false_inactive_determinate == 1);  // covariate 1 is truly active
  CHECK(cc.active_indeterminate == 2);        // covariates 2 and 3 selected
  CHECK(cc.false_active_indeterminate == 1);  // covariate 2 is truly inactive
  CHECK(cc.inactive_indeterminate == 0);
}

TEST_CASE("formatted report carries the headline numbers") {
  const Dataset d = testutil::golden_dataset();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
  const SweepResult sweep =
      stub_sweep({Eigen::VectorXd::Constant(8, 0.4), Eigen::VectorXd::Constant(8, 2.0)},
                 mean);
  const SelectionReport rep = build_report(d, sweep, "gibbs");
  const std::string text = format_report(rep);
  CHECK(text.find("indeterminate 8") != std::string::npos);
  CHECK(text.find("odds_lower") != std::string::npos);
  CHECK(text.find("min squared error") != std::string::npos);
  CHECK(text.find("delta") == std::string::npos);  // no truth supplied
}

TEST_CASE("empty sweep is rejected") {
  const Dataset d = testutil::golden_dataset();
  CHECK_THROWS_AS(build_report(d, SweepResult{}, "exact"), PreconditionError);
}
