#include "wkde/bandwidth.hpp"
#include "wkde/csv.hpp"
#include "wkde/density.hpp"
#include "wkde/distributions.hpp"
#include "wkde/errors.hpp"
#include "wkde/simulate.hpp"
#include "wkde/weights.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

[[noreturn]] void usage_error(const std::string& name, const std::string& msg)
{
  std::cerr << "error: " << name << ": " << msg << "\n";
  std::exit(kExitUsage);
}

unsigned threads_or_env(unsigned flag_value)
{
  if (flag_value > 0)
    return flag_value;
  if (const char* env = std::getenv("WKDE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
      return unsigned(v);
  }
  return 0; // library default: all cores
}

std::uint64_t seed_or_entropy(const std::optional<std::uint64_t>& seed)
{
  if (seed)
    return *seed;
  std::random_device rd;
  const std::uint64_t s =
    (std::uint64_t(rd()) << 32) ^ std::uint64_t(rd());
  std::cerr << "no --seed given; using entropy seed " << s << "\n";
  return s;
}

struct EstimateArgs {
  std::string input;
  std::string output = "estimate.csv";
  std::string kernel = "gaussian";
  std::string estimator = "wkde";
  std::string bandwidth = "nrd";
  double fixed_h = 0.0;
  std::string weights; // empty: CSV weights or uniform
  std::string bias_fn;
  std::string dist;
  std::string residual_model;
  double adaptive_alpha = 0.3;
  std::string boundary;
  std::size_t lscv_rounds = 5;
  std::size_t lscv_grid = 21;
  std::string lscv_seed_selector = "nrd";
  bool lscv_strict = false;
  std::size_t grid_n = 512;
  double grid_min = std::nan("");
  double grid_max = std::nan("");
  bool survival = false;
};

std::function<double(double)> make_bias(const EstimateArgs& args,
                                        const std::vector<double>& x)
{
  // moments for b1/b2 come from --dist when given, otherwise from the data
  double mu, sigma;
  if (!args.dist.empty()) {
    const wkde::TargetDist d = wkde::TargetDist::parse(args.dist);
    mu = d.mean();
    sigma = d.sd();
  } else {
    mu = 0.0;
    for (double xi : x)
      mu += xi;
    mu /= double(x.size());
    double ss = 0.0;
    for (double xi : x)
      ss += (xi - mu) * (xi - mu);
    sigma = std::sqrt(ss / double(x.size() > 1 ? x.size() - 1 : 1));
  }
  const wkde::TargetDist proxy = wkde::TargetDist::normal(mu, sigma);
  if (args.bias_fn == "b1")
    return wkde::biasing_b1(proxy);
  if (args.bias_fn == "b2")
    return wkde::biasing_b2(proxy);
  usage_error("InvalidOptions", "--bias-fn must be b1 or b2");
}

int cmd_estimate(const EstimateArgs& args)
{
  const wkde::KernelSpec kernel = wkde::KernelSpec::from_name(args.kernel);

  // validation before any work
  if (args.bandwidth == "lscv" &&
      kernel.family != wkde::KernelFamily::gaussian)
    usage_error("UnsupportedKernel", "LSCV requires the gaussian kernel");
  if (args.estimator == "kp" &&
      kernel.family != wkde::KernelFamily::gaussian)
    usage_error("UnsupportedKernel",
                "the kp estimator uses the gaussian kernel");
  if (args.estimator == "kp" && args.bandwidth != "nrd" &&
      args.bandwidth != "kp")
    usage_error("InvalidOptions",
                "the kp estimator selects its own local bandwidths");
  if (args.bandwidth == "kp" && args.estimator != "kp")
    usage_error("InvalidOptions",
                "--bandwidth kp is only meaningful with --estimator kp");
  if ((args.estimator == "fb" || args.estimator == "fwu") &&
      args.bias_fn.empty())
    usage_error("InvalidOptions", args.estimator + " needs --bias-fn");
  if (!args.boundary.empty() && args.boundary != "reflect")
    usage_error("InvalidOptions", "--boundary supports only 'reflect'");
  if (!args.boundary.empty() && args.estimator != "wkde")
    usage_error("InvalidOptions",
                "--boundary reflect applies to --estimator wkde");

  wkde::CsvTable table;
  wkde::SampleColumns cols;
  try {
    table = wkde::read_csv(args.input);
    cols = wkde::sample_columns(table);
  } catch (const wkde::Error& e) {
    usage_error(e.name(), e.what());
  }

  if (args.estimator == "kp" && !cols.delta)
    usage_error("MissingColumn", "--estimator kp needs a delta column");
  if ((args.weights == "km" || args.weights == "windowed") && !cols.delta)
    usage_error("MissingColumn",
                "--weights " + args.weights + " needs a delta column");
  if (args.weights == "windowed" && args.residual_model.empty())
    usage_error("InvalidOptions", "--weights windowed needs --residual-model");
  if (args.weights == "biased" && args.bias_fn.empty())
    usage_error("InvalidOptions", "--weights biased needs --bias-fn");

  try {
    // assemble the weighted sample
    std::vector<int> delta =
      cols.delta ? *cols.delta : std::vector<int>(cols.x.size(), 1);
    wkde::WeightedSample sorted =
      wkde::WeightedSample::uniform(cols.x, delta);

    std::vector<double> w;
    if (args.weights.empty()) {
      if (cols.w) {
        w.resize(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i)
          w[i] = (*cols.w)[sorted.order()[i]];
      } else {
        w = wkde::uniform_weights(sorted.size());
      }
    } else if (args.weights == "uniform") {
      w = wkde::uniform_weights(sorted.size());
    } else if (args.weights == "km") {
      w = wkde::km_weights(sorted.x(), sorted.delta());
    } else if (args.weights == "biased") {
      w = wkde::biased_weights(sorted.x(), make_bias(args, sorted.x()));
    } else if (args.weights == "windowed") {
      const wkde::CsvTable model = wkde::read_csv(args.residual_model);
      std::vector<double> r_hat;
      if (model.column("beta0") >= 0 && model.column("beta1") >= 0) {
        const double b0 = model.rows.at(0)[std::size_t(model.column("beta0"))];
        const double b1 = model.rows.at(0)[std::size_t(model.column("beta1"))];
        for (std::size_t i = 0; i < sorted.size(); ++i)
          if (sorted.delta()[i] == 0)
            r_hat.push_back(std::max(0.0, b0 + b1 * sorted.x()[i]));
      } else if (model.column("r_hat") >= 0) {
        r_hat = model.values(model.column("r_hat"));
      } else {
        usage_error("ParseError",
                    "--residual-model needs columns beta0,beta1 or r_hat");
      }
      w = wkde::redistribute_windowed(sorted.x(), sorted.delta(), r_hat);
    } else {
      usage_error("InvalidOptions", "unknown --weights " + args.weights);
    }
    const wkde::WeightedSample sample(sorted.x(), std::move(w),
                                      sorted.delta());

    // bandwidth
    wkde::BandwidthResult bw;
    if (args.fixed_h > 0.0) {
      bw.h = args.fixed_h;
    } else if (args.bandwidth == "nrd") {
      bw = wkde::h_normal_ref(sample);
    } else if (args.bandwidth == "exp") {
      bw = wkde::h_exp_ref(sample);
    } else if (args.bandwidth == "dpi") {
      bw = wkde::h_plugin(sample.x());
    } else if (args.bandwidth == "lscv") {
      const double h0 = args.lscv_seed_selector == "exp"
                          ? wkde::h_exp_ref(sample).h
                          : wkde::h_normal_ref(sample).h;
      wkde::LscvOptions opts;
      opts.rounds = args.lscv_rounds;
      opts.grid_n = args.lscv_grid;
      opts.strict = args.lscv_strict;
      bw = wkde::lscv_search(sample, h0, opts);
    } else if (args.bandwidth == "kp") {
      bw.h = wkde::h_normal_ref(sample).h; // grid padding scale only
    } else {
      usage_error("InvalidOptions", "unknown --bandwidth " + args.bandwidth);
    }

    // evaluation grid
    const bool nonneg =
      !args.boundary.empty() || args.estimator == "kp";
    double lo = std::isnan(args.grid_min)
                  ? (nonneg ? 0.0 : sample.x().front() - 4.0 * bw.h)
                  : args.grid_min;
    double hi = std::isnan(args.grid_max) ? sample.x().back() + 4.0 * bw.h
                                          : args.grid_max;
    std::vector<double> grid = wkde::linspace(lo, hi, args.grid_n);

    wkde::DensityEstimate est;
    if (args.estimator == "wkde") {
      est = args.boundary.empty()
              ? wkde::wkde_eval(sample, bw.h, std::move(grid), kernel)
              : wkde::reflect_boundary(sample, bw.h, std::move(grid), kernel);
    } else if (args.estimator == "awkde") {
      est = wkde::awkde_eval(sample, bw.h, args.adaptive_alpha,
                             std::move(grid), kernel);
    } else if (args.estimator == "kp") {
      est = wkde::kp_estimate(sample.x(), sample.delta(), std::move(grid));
    } else if (args.estimator == "fb") {
      est = wkde::biased_fb(sample.x(), make_bias(args, sample.x()), bw.h,
                            std::move(grid));
    } else if (args.estimator == "fwu") {
      est = wkde::biased_fwu(sample.x(), make_bias(args, sample.x()), bw.h,
                             std::move(grid));
    } else {
      usage_error("InvalidOptions", "unknown --estimator " + args.estimator);
    }

    std::vector<double> surv;
    if (args.survival)
      surv = wkde::survival_from_density(est);

    std::ostringstream out;
    out << "grid,f";
    if (args.survival)
      out << ",S";
    out << "\n";
    char buf[96];
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      if (args.survival)
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", est.grid[i],
                      est.f[i], surv[i]);
      else
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", est.grid[i],
                      est.f[i]);
      out << buf;
    }
    wkde::write_file_atomic(args.output, out.str());

    if (args.estimator == "kp") {
      std::cerr << "kp estimator: local bandwidths, " << sample.event_count()
                << " event points of " << sample.size() << "\n";
    } else {
      std::cerr << "bandwidth h=" << bw.h << " (" << args.bandwidth << ")\n";
      if (args.bandwidth == "lscv") {
        std::cerr << "lscv rounds:";
        for (const auto& r : bw.trace)
          std::cerr << " [" << r.lo << "," << r.hi << "]->" << r.best_h;
        std::cerr << (bw.edge_saturated ? " (edge saturated)" : "") << "\n";
      }
    }
    std::cerr << "wrote " << est.grid.size() << " rows to " << args.output
              << "\n";
  } catch (const wkde::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

struct SimulateArgs {
  std::string table;
  std::size_t reps = 2000;
  std::optional<std::uint64_t> seed;
  std::string out = "results.csv";
  unsigned threads = 0;
  std::vector<std::size_t> sizes;
  double cens_rate = 0.3;
};

int cmd_simulate(const SimulateArgs& args)
{
  wkde::ExperimentConfig cfg;
  if (args.table == "1")
    cfg.scenario = wkde::Scenario::complete_normal;
  else if (args.table == "2")
    cfg.scenario = wkde::Scenario::censored_normal;
  else if (args.table == "3")
    cfg.scenario = wkde::Scenario::censored_weibull;
  else if (args.table == "5")
    cfg.scenario = wkde::Scenario::kp_normal;
  else if (args.table == "6")
    cfg.scenario = wkde::Scenario::kp_exponential;
  else if (args.table == "7")
    cfg.scenario = wkde::Scenario::kp_weibull;
  else if (args.table == "bias")
    cfg.scenario = wkde::Scenario::biased_sampling;
  else
    usage_error("UnknownTable", "--table must be one of 1|2|3|5|6|7|bias");

  if (!(args.cens_rate > 0.0 && args.cens_rate < 1.0))
    usage_error("InvalidOptions", "--cens-rate must lie in (0, 1)");
  cfg.reps = args.reps;
  cfg.seed = seed_or_entropy(args.seed);
  cfg.threads = threads_or_env(args.threads);
  cfg.sizes = args.sizes;
  cfg.censor_rate = args.cens_rate;
  cfg.progress = &std::cerr;

  try {
    wkde::ExperimentResult result;
    switch (cfg.scenario) {
    case wkde::Scenario::complete_normal:
    case wkde::Scenario::censored_normal:
    case wkde::Scenario::censored_weibull:
      result = wkde::run_part1(cfg);
      break;
    case wkde::Scenario::biased_sampling:
      result = wkde::run_biased(cfg);
      break;
    default:
      result = wkde::run_part2(cfg);
      break;
    }
    std::ostringstream os;
    result.write_csv(os);
    wkde::write_file_atomic(args.out, os.str());
    std::cerr << "wrote " << result.cells.size() << " cells to " << args.out
              << "\n";
    if (cfg.reps == 1)
      std::cerr << "warning: reps=1, standard errors reported as 0\n";
  } catch (const wkde::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

struct LungArgs {
  std::string mode = "windowed";
  std::string input;
  std::string out = "lung.csv";
  std::size_t grid_n = 512;
};

int cmd_lung(const LungArgs& args)
{
  wkde::LungMode mode;
  try {
    mode = wkde::lung_mode_from_name(args.mode);
  } catch (const wkde::Error& e) {
    usage_error(e.name(), e.what());
  }

  std::vector<wkde::LungRecord> data;
  if (args.input.empty()) {
    data = wkde::lung_dataset();
  } else {
    try {
      const wkde::CsvTable table = wkde::read_csv(args.input);
      const int tc = table.column("t");
      const int dc = table.column("delta");
      const int uc = table.column("t_ultimate");
      if (tc < 0 || dc < 0)
        usage_error("ParseError", "lung input needs columns t,delta"
                                  "[,t_ultimate]");
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        wkde::LungRecord rec;
        rec.time = table.rows[i][std::size_t(tc)];
        rec.death = int(table.rows[i][std::size_t(dc)]);
        rec.ultimate =
          uc >= 0 ? table.rows[i][std::size_t(uc)] : std::nan("");
        data.push_back(rec);
      }
    } catch (const wkde::Error& e) {
      usage_error(e.name(), e.what());
    }
  }

  try {
    wkde::LungResult res = wkde::run_lung_pipeline(
      data, mode, wkde::linspace(0.0, 110.0, args.grid_n));
    std::ostringstream os;
    os << "grid,f,S\n";
    char buf[96];
    for (std::size_t i = 0; i < res.density.grid.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n",
                    res.density.grid[i], res.density.f[i], res.survival[i]);
      os << buf;
    }
    wkde::write_file_atomic(args.out, os.str());
    std::cerr << "mode=" << wkde::to_string(mode) << " h=" << res.h << "\n";
    if (mode == wkde::LungMode::windowed)
      std::cerr << "residual model: beta0=" << res.fit.beta0
                << " beta1=" << res.fit.beta1 << " p=" << res.fit.p_value
                << "\n";
    std::cerr << "wrote " << res.density.grid.size() << " rows to "
              << args.out << "\n";
  } catch (const wkde::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Weighted kernel density estimation toolkit" };
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand(
    "estimate", "Estimate a density from a CSV sample");
  estimate->add_option("--input", est.input, "input CSV (header x[,delta][,w])")
    ->required();
  estimate->add_option("--output", est.output, "output CSV path");
  estimate->add_option("--kernel", est.kernel, "gaussian|epanechnikov");
  estimate->add_option("--estimator", est.estimator,
                       "wkde|awkde|kp|fb|fwu");
  estimate->add_option("--bandwidth", est.bandwidth, "nrd|exp|dpi|lscv|kp");
  estimate->add_option("--fixed-h", est.fixed_h, "bypass selection");
  estimate->add_option("--weights", est.weights,
                       "uniform|km|biased|windowed (default: CSV w column "
                       "or uniform)");
  estimate->add_option("--bias-fn", est.bias_fn, "b1|b2");
  estimate->add_option("--dist", est.dist,
                       "target distribution for b1/b2 moments, e.g. "
                       "normal:10,2");
  estimate->add_option("--residual-model", est.residual_model,
                       "CSV with beta0,beta1 or per-censored r_hat");
  estimate->add_option("--adaptive", est.adaptive_alpha,
                       "sensitivity alpha for --estimator awkde");
  estimate->add_option("--boundary", est.boundary, "reflect");
  estimate->add_option("--lscv-rounds", est.lscv_rounds, "search rounds");
  estimate->add_option("--lscv-grid", est.lscv_grid, "grid points per round");
  estimate->add_option("--lscv-seed-selector", est.lscv_seed_selector,
                       "nrd|exp");
  estimate->add_flag("--lscv-strict", est.lscv_strict,
                     "objective without the 1/h diagonal factor");
  estimate->add_option("--grid-n", est.grid_n, "evaluation points");
  estimate->add_option("--grid-min", est.grid_min, "grid lower bound");
  estimate->add_option("--grid-max", est.grid_max, "grid upper bound");
  estimate->add_flag("--survival", est.survival, "append survival column");

  SimulateArgs sim;
  CLI::App* simulate =
    app.add_subcommand("simulate", "Monte Carlo experiment tables");
  simulate->add_option("--table", sim.table, "1|2|3|5|6|7|bias")->required();
  simulate->add_option("--reps", sim.reps, "replicates per cell");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
    simulate->add_option("--seed", seed_value, "master seed");
  simulate->add_option("--out", sim.out, "output CSV path");
  simulate->add_option("--threads", sim.threads,
                       "worker threads (env WKDE_THREADS, default cores)");
  simulate->add_option("--sizes", sim.sizes,
                       "override the scenario sample sizes");
  simulate->add_option("--cens-rate", sim.cens_rate,
                       "censoring rate for the censored scenarios");

  LungArgs lung;
  CLI::App* lung_cmd =
    app.add_subcommand("lung", "Informative-censoring pipeline");
  lung_cmd->add_option("--mode", lung.mode, "mp|zero|ultimate|windowed");
  lung_cmd->add_option("--input", lung.input,
                       "optional CSV t,delta[,t_ultimate]; default bundled "
                       "dataset");
  lung_cmd->add_option("--out", lung.out, "output CSV path");
  lung_cmd->add_option("--grid-n", lung.grid_n, "evaluation points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (estimate->parsed())
    return cmd_estimate(est);
  if (simulate->parsed()) {
    if (seed_opt->count() > 0)
      sim.seed = seed_value;
    return cmd_simulate(sim);
  }
  if (lung_cmd->parsed())
    return cmd_lung(lung);
  return kExitUsage;
}
