// cbvs: cautious spike-and-slab variable selection over a set of priors.
//
// Subcommands: simulate (synthetic benchmark data), fit (sweep an alpha box
// and classify covariates), metrics (aggregate a report), plotdata (CSV
// series for the standard diagnostic figures).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cbvs/csv.hpp"
#include "cbvs/decision.hpp"
#include "cbvs/densities.hpp"
#include "cbvs/errors.hpp"
#include "cbvs/gibbs.hpp"
#include "cbvs/model_space.hpp"
#include "cbvs/orthogonal.hpp"
#include "cbvs/report_json.hpp"
#include "cbvs/synth.hpp"

namespace {

using nlohmann::ordered_json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("CSS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw cbvs::PreconditionError("CSS_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw cbvs::PreconditionError("cannot write " + path);
  out << text;
}

ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string preset;
  cbvs::SynthSpec spec;
  std::optional<std::uint64_t> seed;
  std::string out = "synthetic";
};

void run_simulate(const SimulateArgs& args) {
  cbvs::SynthSpec spec = args.spec;
  if (!args.preset.empty()) {
    // the four benchmark regimes: n=50, p=100, increasingly dense support
    int active = 0;
    if (args.preset == "dataset1") active = 10;
    else if (args.preset == "dataset2") active = 20;
    else if (args.preset == "dataset3") active = 50;
    else if (args.preset == "dataset4") active = 60;
    else
      throw cbvs::PreconditionError("unknown preset " + args.preset +
                                    " (expected dataset1..dataset4)");
    spec.n = 50;
    spec.p = 100;
    spec.n_active = active;
  }
  spec.seed = resolve_seed(args.seed);
  const cbvs::SyntheticData synth = cbvs::generate_synthetic(spec);
  std::string prefix = args.out;
  if (prefix.size() > 4 && prefix.ends_with(".csv"))
    prefix.resize(prefix.size() - 4);
  cbvs::save_csv(prefix + ".csv", synth.data);

  ordered_json side;
  side["seed"] = spec.seed;
  side["spec"] = {{"n", spec.n},
                  {"p", spec.p},
                  {"n_active", spec.n_active},
                  {"corr_base", spec.corr_base},
                  {"noise_var", spec.noise_var},
                  {"coef_low", spec.coef_low},
                  {"coef_high", spec.coef_high}};
  side["beta_true"] = vec_json(synth.beta_true);
  side["active_indices"] = synth.active_indices;
  side["standardized"] = synth.data.standardized;
  write_text(prefix + ".truth.json", side.dump(2) + "\n");
  std::cout << "wrote " << prefix << ".csv and " << prefix
            << ".truth.json (n=" << spec.n << ", p=" << spec.p << ", "
            << spec.n_active << " active)\n";
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string data_path;
  std::string response = "y";
  bool no_standardize = false;
  double alpha_lo = 0, alpha_hi = 0;
  std::string alpha_preset;
  bool elicit = false;
  cbvs::Hyperparameters hp;
  std::string backend = "auto";
  std::optional<double> sigma2;
  int iters = 10000, burnin = 2000, chains = 2, grid = 0;
  std::uint64_t cap = cbvs::kDefaultEnumerationCap;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth_path;
  bool quiet = false;
};

cbvs::AlphaBox make_box(const FitArgs& args, const cbvs::Dataset& data) {
  if (!args.alpha_preset.empty()) {
    const auto& presets = cbvs::alpha_presets();
    const auto it = presets.find(args.alpha_preset);
    if (it == presets.end()) {
      std::string names;
      for (const auto& [k, v] : presets) names += (names.empty() ? "" : ", ") + k;
      throw cbvs::PreconditionError("unknown alpha preset " + args.alpha_preset +
                                    " (available: " + names + ")");
    }
    return cbvs::AlphaBox::uniform(data.p(), it->second.lo, it->second.hi);
  }
  if (args.elicit) {
    const cbvs::ElicitationResult el = cbvs::elicit_alpha_interval(data);
    std::cerr << "elicited alpha box [" << el.alpha_lo << ", " << el.alpha_hi
              << "]\n";
    return cbvs::AlphaBox::uniform(data.p(), el.alpha_lo, el.alpha_hi);
  }
  if (args.alpha_lo > 0 || args.alpha_hi > 0)
    return cbvs::AlphaBox::uniform(data.p(), args.alpha_lo, args.alpha_hi);
  throw cbvs::PreconditionError(
      "no alpha box given: use --alpha-lo/--alpha-hi, --alpha-preset or --elicit");
}

bool orthogonal_ok(const cbvs::Dataset& data) {
  try {
    cbvs::ols_orthogonal(data);
    return true;
  } catch (const cbvs::PreconditionError&) {
    return false;
  }
}

std::vector<Eigen::VectorXd> sweep_alphas(const cbvs::AlphaBox& box, int grid) {
  std::vector<Eigen::VectorXd> out;
  if (box.degenerate()) {
    out.push_back(box.lo);
  } else if (grid <= 0) {
    out.push_back(box.lo);
    out.push_back(box.hi);
  } else {
    const int points = std::max(grid, 2);
    for (int g = 0; g < points; ++g) {
      const double t = static_cast<double>(g) / (points - 1);
      out.push_back(box.lo + t * (box.hi - box.lo));
    }
  }
  return out;
}

double safe_odds(double prob) {
  const double p = std::min(std::max(prob, 1e-15), 1.0 - 1e-15);
  return p / (1.0 - p);
}

cbvs::SweepConfigResult config_from_probs(const Eigen::VectorXd& alpha,
                                          const Eigen::VectorXd& inclusion_prob,
                                          const Eigen::VectorXd& beta_mean) {
  cbvs::SweepConfigResult cfg;
  cfg.alpha = alpha;
  cfg.odds.resize(alpha.size());
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    cfg.odds(j) = safe_odds(inclusion_prob(j));
  cfg.active_set = cbvs::active_set(cfg.odds);
  cfg.chain.kept = 1;
  cfg.chain.beta_sum = beta_mean;
  cfg.chain.beta_sum_sq = beta_mean.array().square().matrix();
  cfg.chain.inclusion_counts = Eigen::VectorXi::Zero(alpha.size());
  return cfg;
}

void finish_sweep(cbvs::SweepResult& sweep) {
  const Eigen::Index p = sweep.configs.front().alpha.size();
  sweep.odds_lower = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  sweep.odds_upper = Eigen::VectorXd::Constant(p, -std::numeric_limits<double>::infinity());
  for (const auto& cfg : sweep.configs) {
    sweep.odds_lower = sweep.odds_lower.cwiseMin(cfg.odds);
    sweep.odds_upper = sweep.odds_upper.cwiseMax(cfg.odds);
  }
}

cbvs::SweepResult sweep_exact(const cbvs::Dataset& data, const cbvs::AlphaBox& box,
                              const cbvs::Hyperparameters& hp, int grid,
                              std::uint64_t cap) {
  cbvs::SweepResult sweep;
  for (const Eigen::VectorXd& alpha : sweep_alphas(box, grid)) {
    const Eigen::VectorXd probs = cbvs::marginal_inclusion_exact(data, alpha, hp, cap);
    const Eigen::VectorXd mean =
        cbvs::beta_posterior_mixture_exact(data, alpha, hp, cap).posterior_mean();
    sweep.configs.push_back(config_from_probs(alpha, probs, mean));
  }
  finish_sweep(sweep);
  return sweep;
}

cbvs::SweepResult sweep_orthogonal(const cbvs::Dataset& data,
                                   const cbvs::AlphaBox& box,
                                   const cbvs::Hyperparameters& hp, int grid,
                                   double sigma2) {
  const Eigen::VectorXd beta_hat = cbvs::ols_orthogonal(data);
  const Eigen::Index p = data.p();
  cbvs::SweepResult sweep;
  for (const Eigen::VectorXd& alpha : sweep_alphas(box, grid)) {
    Eigen::VectorXd probs(p), mean(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto w0 = cbvs::shrinkage_component(0, beta_hat(j), data.n(), sigma2, hp);
      const auto w1 = cbvs::shrinkage_component(1, beta_hat(j), data.n(), sigma2, hp);
      probs(j) = cbvs::gamma_posterior_prob(alpha(j), w1.log_w, w0.log_w);
      mean(j) = cbvs::posterior_mean(alpha(j), beta_hat(j), data.n(), sigma2, hp);
    }
    sweep.configs.push_back(config_from_probs(alpha, probs, mean));
  }
  finish_sweep(sweep);
  return sweep;
}

void run_fit(const FitArgs& args) {
  const cbvs::Dataset data =
      cbvs::load_csv(args.data_path, args.response, !args.no_standardize);
  const cbvs::AlphaBox box = make_box(args, data);
  box.validate();
  for (const std::string& w : args.hp.validate())
    std::cerr << "warning: " << w << "\n";

  std::string backend = args.backend;
  if (backend == "auto") {
    if (args.sigma2 && orthogonal_ok(data))
      backend = "orthogonal";
    else if (data.p() < 63 && (1ULL << data.p()) <= args.cap)
      backend = "exact";
    else
      backend = "gibbs";
  }

  std::optional<Eigen::VectorXd> beta_true;
  if (!args.truth_path.empty()) {
    std::ifstream in(args.truth_path);
    if (!in) throw cbvs::PreconditionError("cannot open " + args.truth_path);
    const auto side = nlohmann::json::parse(in);
    const auto& arr = side.at("beta_true");
    Eigen::VectorXd bt(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
      bt(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    if (bt.size() != data.p())
      throw cbvs::PreconditionError("truth sidecar length does not match data");
    beta_true = std::move(bt);
  }

  cbvs::SweepResult sweep;
  if (backend == "orthogonal") {
    if (!args.sigma2)
      throw cbvs::PreconditionError("--backend orthogonal requires --sigma2");
    sweep = sweep_orthogonal(data, box, args.hp, args.grid, *args.sigma2);
  } else if (backend == "exact") {
    sweep = sweep_exact(data, box, args.hp, args.grid, args.cap);
  } else if (backend == "gibbs") {
    cbvs::SweepSchedule schedule;
    schedule.mode = args.grid > 0 ? cbvs::SweepSchedule::Mode::Grid
                                  : cbvs::SweepSchedule::Mode::Endpoints;
    schedule.grid_points = std::max(args.grid, 2);
    cbvs::ChainConfig cc;
    cc.iterations = args.iters;
    cc.burnin = args.burnin;
    cc.chains = args.chains;
    sweep = cbvs::sensitivity_sweep(data, box, args.hp, schedule, cc,
                                    resolve_seed(args.seed));
  } else {
    throw cbvs::PreconditionError("unknown backend " + backend);
  }

  const cbvs::SelectionReport report = cbvs::build_report(
      data, sweep, backend, beta_true ? &*beta_true : nullptr);
  if (!args.quiet) std::cout << cbvs::format_report(report);
  if (!args.out.empty()) write_text(args.out, cbvs::report_to_json(report));
}

// ----------------------------------------------------------------- metrics

void run_metrics(const std::string& report_path, const std::string& truth_path,
                 const std::string& out) {
  std::ifstream in(report_path);
  if (!in) throw cbvs::PreconditionError("cannot open " + report_path);
  const auto report = nlohmann::json::parse(in);

  ordered_json m;
  m["schema_version"] = cbvs::kReportSchemaVersion;
  m["min_squared_error"] = report.at("min_squared_error");
  m["max_squared_error"] = report.at("max_squared_error");
  m["indeterminacy"] = report.at("indeterminacy");
  m["counts"] = report.at("counts");

  if (!truth_path.empty()) {
    std::ifstream tin(truth_path);
    if (!tin) throw cbvs::PreconditionError("cannot open " + truth_path);
    const auto side = nlohmann::json::parse(tin);
    std::vector<double> bt = side.at("beta_true").get<std::vector<double>>();
    auto delta_of = [&bt](const nlohmann::json& fit) {
      const std::vector<double> mean = fit.at("posterior_mean").get<std::vector<double>>();
      const std::vector<int> active = fit.at("active").get<std::vector<int>>();
      std::vector<char> mask(bt.size(), 0);
      for (int j : active) mask[static_cast<std::size_t>(j)] = 1;
      double d = 0;
      for (std::size_t j = 0; j < bt.size(); ++j) {
        const double e = (mask[j] ? mean[j] : 0.0) - bt[j];
        d += e * e;
      }
      return d;
    };
    const int opt = report.at("optimistic_config").get<int>();
    const int pes = report.at("pessimistic_config").get<int>();
    m["delta_optimistic"] = delta_of(report.at("fits").at(opt));
    m["delta_pessimistic"] = delta_of(report.at("fits").at(pes));
    if (report.contains("confusion_optimistic"))
      m["confusion_optimistic"] = report.at("confusion_optimistic");
    if (report.contains("confusion_pessimistic"))
      m["confusion_pessimistic"] = report.at("confusion_pessimistic");
  } else {
    std::cerr << "warning: no truth sidecar, delta(beta) omitted\n";
  }
  write_text(out, m.dump(2) + "\n");
}

// ---------------------------------------------------------------- plotdata

struct PlotArgs {
  std::string series;
  double alpha = 0.5;
  double beta_hat = 0.3;
  long n = 100;
  double sigma2 = 1.0;
  cbvs::Hyperparameters hp{0.05, 2.0, 1.0, 0.01, 0.01};  // visible spike by default
  double lo = -4, hi = 4;
  int points = 401;
  std::string out;
};

void run_plotdata(const PlotArgs& args) {
  std::ostringstream os;
  os.precision(12);
  const auto grid = [&args](double lo, double hi, int k, auto&& f) {
    for (int i = 0; i < k; ++i) f(lo + (hi - lo) * i / (k - 1));
  };
  if (args.series == "prior-density") {
    os << "beta,density\n";
    grid(args.lo, args.hi, args.points, [&](double b) {
      os << b << ","
         << std::exp(cbvs::marginal_prior_log_density(b, args.alpha, args.sigma2, args.hp))
         << "\n";
    });
  } else if (args.series == "posterior-cdf") {
    os << "beta,cdf\n";
    const auto post = cbvs::coefficient_posterior(args.alpha, args.beta_hat, args.n,
                                                  args.sigma2, args.hp);
    grid(args.lo, args.hi, args.points, [&](double b) {
      os << b << "," << post.cdf(b) << "\n";
    });
  } else if (args.series == "mean-vs-alpha" || args.series == "variance-vs-alpha") {
    const bool want_mean = args.series == "mean-vs-alpha";
    os << "alpha," << (want_mean ? "mean" : "variance") << "\n";
    grid(1e-4, 1 - 1e-4, args.points, [&](double a) {
      const double v = want_mean
                           ? cbvs::posterior_mean(a, args.beta_hat, args.n, args.sigma2, args.hp)
                           : cbvs::posterior_variance(a, args.beta_hat, args.n,
                                                      args.sigma2, args.hp);
      os << a << "," << v << "\n";
    });
  } else if (args.series == "indeterminacy-region") {
    // thresholds on beta_hat^2 as the slab scale varies, at fixed eps box
    os << "tau1,lower,upper\n";
    grid(std::max(args.hp.tau0 * 2, 0.05), 10.0, args.points, [&](double t1) {
      cbvs::Hyperparameters hp = args.hp;
      hp.tau1 = t1;
      const auto [lo, hi] =
          cbvs::indeterminacy_region(args.n, args.sigma2, hp, args.alpha, args.alpha);
      os << t1 << "," << lo << "," << hi << "\n";
    });
  } else {
    throw cbvs::PreconditionError(
        "unknown series " + args.series +
        " (prior-density, posterior-cdf, mean-vs-alpha, variance-vs-alpha, "
        "indeterminacy-region)");
  }
  write_text(args.out, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cautious spike-and-slab variable selection"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  simulate->add_option("--preset", sim.preset, "dataset1..dataset4");
  simulate->add_option("--n", sim.spec.n);
  simulate->add_option("--p", sim.spec.p);
  simulate->add_option("--active", sim.spec.n_active);
  simulate->add_option("--corr", sim.spec.corr_base);
  simulate->add_option("--noise-var", sim.spec.noise_var);
  simulate->add_option("--coef-low", sim.spec.coef_low);
  simulate->add_option("--coef-high", sim.spec.coef_high);
  simulate->add_option("--seed", sim.seed, "falls back to CSS_SEED, then 0");
  simulate->add_option("--out", sim.out,
                       "output path prefix (a trailing .csv is stripped)");

  FitArgs fit;
  auto* fitc = app.add_subcommand("fit", "sweep an alpha box and classify");
  fitc->add_option("--data", fit.data_path)->required();
  fitc->add_option("--response", fit.response, "response column name or 0-based index");
  fitc->add_flag("--no-standardize", fit.no_standardize);
  fitc->add_option("--alpha-lo", fit.alpha_lo);
  fitc->add_option("--alpha-hi", fit.alpha_hi);
  fitc->add_option("--alpha-preset", fit.alpha_preset);
  fitc->add_flag("--elicit", fit.elicit, "ridge p-value elicitation of the box");
  fitc->add_option("--tau0", fit.hp.tau0);
  fitc->add_option("--tau1", fit.hp.tau1);
  fitc->add_option("--s", fit.hp.s);
  fitc->add_option("--a", fit.hp.a);
  fitc->add_option("--b", fit.hp.b);
  fitc->add_option("--backend", fit.backend, "auto|orthogonal|exact|gibbs");
  fitc->add_option("--sigma2", fit.sigma2, "known noise variance (orthogonal backend)");
  fitc->add_option("--iters", fit.iters);
  fitc->add_option("--burnin", fit.burnin);
  fitc->add_option("--chains", fit.chains);
  fitc->add_option("--grid", fit.grid, "grid points per sweep (0 = endpoints only)");
  fitc->add_option("--cap", fit.cap, "enumeration capacity for the exact backend");
  fitc->add_option("--seed", fit.seed, "falls back to CSS_SEED, then 0");
  fitc->add_option("--out", fit.out, "JSON report path ('-' for stdout)");
  fitc->add_option("--truth", fit.truth_path, "truth sidecar for delta(beta)");
  fitc->add_flag("--quiet", fit.quiet, "suppress the text table");

  std::string metrics_report, metrics_truth, metrics_out;
  auto* metrics = app.add_subcommand("metrics", "aggregate a JSON report");
  metrics->add_option("--report", metrics_report)->required();
  metrics->add_option("--truth", metrics_truth);
  metrics->add_option("--out", metrics_out);

  PlotArgs plot;
  auto* plotdata = app.add_subcommand("plotdata", "CSV series for figures");
  plotdata->add_option("--series", plot.series)->required();
  plotdata->add_option("--alpha", plot.alpha);
  plotdata->add_option("--beta-hat", plot.beta_hat);
  plotdata->add_option("--n", plot.n);
  plotdata->add_option("--sigma2", plot.sigma2);
  plotdata->add_option("--tau0", plot.hp.tau0);
  plotdata->add_option("--tau1", plot.hp.tau1);
  plotdata->add_option("--lo", plot.lo);
  plotdata->add_option("--hi", plot.hi);
  plotdata->add_option("--points", plot.points);
  plotdata->add_option("--out", plot.out);

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) run_simulate(sim);
    if (fitc->parsed()) run_fit(fit);
    if (metrics->parsed()) run_metrics(metrics_report, metrics_truth, metrics_out);
    if (plotdata->parsed()) run_plotdata(plot);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const cbvs::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const cbvs::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const cbvs::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
