#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "cbvs/csv.hpp"
#include "cbvs/errors.hpp"
#include "cbvs/synth.hpp"
#include "golden_values.hpp"
#include "test_util.hpp"

using namespace cbvs;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/cbvs_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("synthetic generation structure") {
  SynthSpec spec;
  spec.n = 40;
  spec.p = 30;
  spec.n_active = 6;
  spec.seed = 99;
  const SyntheticData s = generate_synthetic(spec);
  CHECK(s.data.n() == 40);
  CHECK(s.data.p() == 30);
  REQUIRE(s.active_indices.size() == 6);
  int nonzero = 0;
  for (Eigen::Index j = 0; j < 30; ++j) {
    if (s.beta_true(j) != 0.0) {
      ++nonzero;
      const double mag = std::abs(s.beta_true(j));
      CHECK(mag >= 1.0);
      CHECK(mag <= 4.0);
    }
  }
  CHECK(nonzero == 6);
  for (std::size_t i = 1; i < s.active_indices.size(); ++i)
    CHECK(s.active_indices[i - 1] < s.active_indices[i]);
  for (int j : s.active_indices) CHECK(s.beta_true(j) != 0.0);
}

TEST_CASE("synthetic generation is seed-deterministic") {
  SynthSpec spec;
  spec.n = 20;
  spec.p = 15;
  spec.n_active = 4;
  spec.seed = 7;
  const SyntheticData a = generate_synthetic(spec);
  const SyntheticData b = generate_synthetic(spec);
  CHECK((a.data.x - b.data.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.data.y - b.data.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.beta_true - b.beta_true).cwiseAbs().maxCoeff() == 0.0);

  spec.seed = 8;
  const SyntheticData c = generate_synthetic(spec);
  CHECK((a.data.x - c.data.x).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.active_indices != c.active_indices);
}

TEST_CASE("synthetic column covariance matches the target") {
  SynthSpec spec;
  spec.n = 100000;
  spec.p = 5;
  spec.n_active = 2;
  spec.seed = 3;
  const SyntheticData s = generate_synthetic(spec);
  Eigen::MatrixXd centered = s.data.x.rowwise() - s.data.x.colwise().mean();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(spec.n - 1);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double target = std::pow(0.2, std::abs(static_cast<double>(i - j)));
      CHECK(std::abs(cov(i, j) - target) < 0.01);
    }
}

TEST_CASE("synthetic spec validation") {
  SynthSpec spec;
  spec.n_active = spec.p + 1;
  CHECK_THROWS_AS(generate_synthetic(spec), PreconditionError);
  spec = SynthSpec{};
  spec.corr_base = 1.0;
  CHECK_THROWS_AS(generate_synthetic(spec), PreconditionError);
  spec = SynthSpec{};
  spec.coef_low = 5.0;
  spec.coef_high = 4.0;
  CHECK_THROWS_AS(generate_synthetic(spec), PreconditionError);
}

TEST_CASE("ridge elicitation matches the frozen oracle") {
  const ElicitationResult el = elicit_alpha_interval(testutil::golden_dataset());
  CHECK(el.alpha_lo == doctest::Approx(golden::kElicitLo).epsilon(1e-12));
  CHECK(el.alpha_hi == doctest::Approx(golden::kElicitHi).epsilon(1e-12));
  CHECK(el.alpha_lo <= el.alpha_hi);
  CHECK(el.method == "ridge-pvalue");
  CHECK(el.counts_at_thresholds.at(0.01) == 2);
  CHECK(el.counts_at_thresholds.at(0.2) == 3);
  CHECK_THROWS_AS(elicit_alpha_interval(testutil::golden_dataset(), 0.5, 0.2),
                  PreconditionError);
}

TEST_CASE("elicitation stays near the floor on pure noise") {
  SynthSpec spec;
  spec.n = 200;
  spec.p = 20;
  spec.n_active = 0;
  spec.seed = 4;
  const SyntheticData s = generate_synthetic(spec);
  const ElicitationResult el = elicit_alpha_interval(s.data);
  CHECK(el.alpha_lo == doctest::Approx(1.0 / 40.0));  // clamp floor 1/(2p)
  CHECK(el.alpha_hi < 0.3);
}

TEST_CASE("elicitation on the sparse benchmark regime") {
  SynthSpec spec;  // defaults: n=50, p=100, 10 active
  spec.seed = 21;
  const SyntheticData s = generate_synthetic(spec);
  const ElicitationResult el = elicit_alpha_interval(s.data);
  CHECK(el.alpha_lo < 0.1);
  CHECK(el.alpha_hi - el.alpha_lo < 0.15);
}

TEST_CASE("correlation screening matches the frozen ranking") {
  const Dataset d = testutil::golden_dataset();
  const std::vector<int> order = screen_covariates(d, d.p());
  REQUIRE(order.size() == 8);
  for (int j = 0; j < 8; ++j)
    CHECK(order[static_cast<std::size_t>(j)] ==
          golden::kScreenOrder[static_cast<std::size_t>(j)]);

  const std::vector<int> top2 = screen_covariates(d, 2);
  CHECK(top2 == std::vector<int>{golden::kScreenOrder[0], golden::kScreenOrder[1]});
  CHECK_THROWS_AS(screen_covariates(d, 9), PreconditionError);
}

TEST_CASE("screening ranks a copied response first") {
  Dataset d = testutil::golden_dataset();
  d.y = d.x.col(3);
  const std::vector<int> order = screen_covariates(d, 1);
  CHECK(order[0] == 3);

  // zero-variance columns sink to the bottom
  d.x.col(0).setConstant(2.0);
  const std::vector<int> all = screen_covariates(d, d.p());
  CHECK(all.back() == 0);
}

TEST_CASE("csv round trip is bit-faithful") {
  const Dataset d = testutil::golden_dataset();
  TempFile f("roundtrip.csv");
  save_csv(f.path, d);
  const Dataset back = load_csv(f.path, "y", false);
  REQUIRE(back.n() == d.n());
  REQUIRE(back.p() == d.p());
  CHECK((back.x - d.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - d.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv parsing") {
  TempFile f("small.csv");
  {
    std::ofstream out(f.path);
    out << "y,a,b\n1.5,2,3\n-0.25,4,5\n2.0,6,7\n";
  }
  const Dataset d = load_csv(f.path, "y", false);
  REQUIRE(d.n() == 3);
  REQUIRE(d.p() == 2);
  CHECK(d.y(1) == -0.25);
  CHECK(d.x(2, 1) == 7.0);

  // response by 0-based index string
  const Dataset byidx = load_csv(f.path, "0", false);
  CHECK(byidx.y(0) == 1.5);

  const Dataset std_on = load_csv(f.path, "y", true);
  CHECK(std_on.standardized);
  CHECK(std::abs(std_on.x.col(0).mean()) < 1e-12);

  CHECK_THROWS_AS(load_csv(f.path, "missing", false), PreconditionError);
  CHECK_THROWS_AS(load_csv("/tmp/does_not_exist_cbvs.csv", "y", false),
                  PreconditionError);
}

TEST_CASE("csv errors name the offending location") {
  TempFile f("bad.csv");
  {
    std::ofstream out(f.path);
    out << "y,a\n1,2\n3\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(f.path, "y", false), doctest::Contains("row 3"),
                       PreconditionError);
  {
    std::ofstream out(f.path);
    out << "y,a\n1,oops\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(f.path, "y", false), doctest::Contains("row 2"),
                       PreconditionError);
  {
    std::ofstream out(f.path);
    out << "y,a\n1,\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(f.path, "y", false),
                       doctest::Contains("missing value"), PreconditionError);
}

TEST_CASE("alpha presets") {
  const auto& presets = alpha_presets();
  CHECK(presets.at("diabetes").lo == 0.2);
  CHECK(presets.at("diabetes").hi == 0.5);
  CHECK(presets.at("gaia").lo == 0.0625);
  CHECK(presets.at("lymphoma").hi == 0.15);
  CHECK(presets.at("nearVacuous").lo == 0.05);
  CHECK(presets.at("nearVacuous").hi == 0.95);
  CHECK(presets.at("synthetic1").lo == 0.05);
  CHECK(presets.at("synthetic4").hi == 0.34);
  for (const auto& [name, box] : presets) {
    CHECK(box.lo > 0.0);
    CHECK(box.lo <= box.hi);
    CHECK(box.hi < 1.0);
  }
}
