#include "wkde/simulate.hpp"

#include "wkde/bandwidth.hpp"
#include "wkde/errors.hpp"
#include "wkde/metrics.hpp"
#include "wkde/weights.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace wkde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned resolve_threads(unsigned requested)
{
  if (requested > 0)
    return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

//! Runs body(rep) for rep in [0, reps) on a small worker pool. Each
//! replicate writes only its own slot, so results do not depend on the
//! thread count.
template<typename F>
void parallel_replicates(std::size_t reps, unsigned threads, F&& body)
{
  threads = std::min<std::size_t>(resolve_threads(threads), reps);
  if (threads <= 1) {
    for (std::size_t r = 0; r < reps; ++r)
      body(r);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= reps)
          return;
        try {
          body(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error)
            first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool)
    th.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

//! Mean and standard error over the non-NaN entries of one column.
void aggregate_column(const std::vector<std::vector<double>>& rows,
                      std::size_t col, double& mean, double& se,
                      std::size_t& count)
{
  double sum = 0.0;
  count = 0;
  for (const auto& row : rows) {
    if (!std::isnan(row[col])) {
      sum += row[col];
      ++count;
    }
  }
  if (count == 0) {
    mean = kNaN;
    se = kNaN;
    return;
  }
  mean = sum / double(count);
  if (count == 1) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (const auto& row : rows)
    if (!std::isnan(row[col]))
      ss += (row[col] - mean) * (row[col] - mean);
  se = std::sqrt(ss / double(count - 1)) / std::sqrt(double(count));
}

std::vector<double> metric_grid(const TargetDist& target, std::size_t m)
{
  return linspace(target.quantile(1e-4), target.quantile(1.0 - 1e-4), m);
}

TargetDist part1_target(Scenario s)
{
  switch (s) {
  case Scenario::complete_normal:
  case Scenario::censored_normal:
  case Scenario::kp_normal:
    return TargetDist::normal(13.0, 3.0);
  case Scenario::censored_weibull:
  case Scenario::kp_weibull:
    return TargetDist::weibull(2.0, 1.0);
  case Scenario::kp_exponential:
    return TargetDist::exponential(1.0);
  default:
    throw Error("InvalidScenario", "no target distribution for scenario");
  }
}

void progress_line(const ExperimentConfig& cfg, const std::string& what,
                   double seconds)
{
  if (!cfg.progress)
    return;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: %zu reps in %.1f s", what.c_str(),
                cfg.reps, seconds);
  *cfg.progress << buf << std::endl;
}

class Stopwatch {
public:
  double seconds() const
  {
    return std::chrono::duration<double>(
             std::chrono::steady_clock::now() - start_)
      .count();
  }

private:
  std::chrono::steady_clock::time_point start_ =
    std::chrono::steady_clock::now();
};

} // namespace

std::string to_string(Scenario s)
{
  switch (s) {
  case Scenario::complete_normal:
    return "complete_normal";
  case Scenario::censored_normal:
    return "censored_normal";
  case Scenario::censored_weibull:
    return "censored_weibull";
  case Scenario::kp_normal:
    return "kp_normal";
  case Scenario::kp_exponential:
    return "kp_exponential";
  case Scenario::kp_weibull:
    return "kp_weibull";
  case Scenario::biased_sampling:
    return "biased_sampling";
  }
  return "?";
}

std::vector<std::size_t> default_sizes(Scenario s)
{
  switch (s) {
  case Scenario::complete_normal:
    return { 20, 30, 50, 100, 300 };
  case Scenario::censored_normal:
  case Scenario::censored_weibull:
    return { 30, 40, 70, 140, 300 };
  case Scenario::kp_normal:
  case Scenario::kp_exponential:
  case Scenario::kp_weibull:
    return { 30, 50, 100, 200 };
  case Scenario::biased_sampling:
    return { 200 };
  }
  return {};
}

const Cell& ExperimentResult::cell(std::size_t n, const std::string& selector,
                                   const std::string& variant) const
{
  for (const auto& c : cells)
    if (c.n == n && c.selector == selector && c.variant == variant)
      return c;
  throw Error("MissingCell", "no cell for n=" + std::to_string(n) + " " +
                               selector + "/" + variant);
}

double ExperimentResult::best_adaptive(std::size_t n,
                                       const std::string& selector) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cells)
    if (c.n == n && c.selector == selector &&
        c.variant.rfind("awkde", 0) == 0)
      best = std::min(best, c.mean_l1);
  return best;
}

void ExperimentResult::write_csv(std::ostream& os) const
{
  os << "scenario,n,selector,variant,mean_l1,se,reps,seed\n";
  char buf[64];
  for (const auto& c : cells) {
    os << c.scenario << ',' << c.n << ',' << c.selector << ',' << c.variant
       << ',';
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", c.mean_l1, c.se);
    os << buf << ',' << c.reps << ',' << c.seed << '\n';
  }
}

ExperimentResult run_part1(const ExperimentConfig& cfg)
{
  if (cfg.scenario != Scenario::complete_normal &&
      cfg.scenario != Scenario::censored_normal &&
      cfg.scenario != Scenario::censored_weibull)
    throw Error("InvalidScenario", "run_part1 handles the fixed-vs-adaptive "
                                   "scenarios only");
  if (cfg.reps < 1)
    throw Error("InvalidOptions", "need reps >= 1");

  const TargetDist target = part1_target(cfg.scenario);
  const bool censored = cfg.scenario != Scenario::complete_normal;
  const std::vector<std::size_t> sizes =
    cfg.sizes.empty() ? default_sizes(cfg.scenario) : cfg.sizes;
  const std::vector<double> grid = metric_grid(target, cfg.grid_m);
  const auto pdf = [&](double v) { return target.pdf(v); };

  TargetDist cens = TargetDist::exponential(1.0);
  if (censored) {
    const double scale = calibrate_censoring_scale(
      target, TargetDist::Family::exponential, cfg.censor_rate);
    cens = censoring_dist(target, TargetDist::Family::exponential, scale);
  }

  const std::vector<std::string> selectors = { "nrd", "dpi", "lscv" };
  const std::size_t variants = 1 + cfg.alphas.size();
  const std::size_t cols = selectors.size() * variants;

  ExperimentResult result;
  for (std::size_t cell_idx = 0; cell_idx < sizes.size(); ++cell_idx) {
    const std::size_t n = sizes[cell_idx];
    if (n < 5)
      throw Error("InvalidOptions", "need n >= 5");
    Stopwatch watch;
    std::vector<std::vector<double>> rows(cfg.reps,
                                          std::vector<double>(cols, kNaN));

    parallel_replicates(cfg.reps, cfg.threads, [&](std::size_t rep) {
      Rng rng(Rng::stream_seed(cfg.seed, cell_idx * cfg.reps + rep));
      std::vector<double> t = target.sample(n, rng);

      std::optional<WeightedSample> built;
      if (!censored) {
        built.emplace(WeightedSample::uniform(std::move(t)));
      } else {
        CensoringResult cr = censor_with(t, cens, rng);
        bool all_censored = false;
        WeightedSample sorted = WeightedSample::uniform(cr.x, cr.delta);
        std::vector<double> w =
          km_weights(sorted.x(), sorted.delta(), &all_censored);
        if (all_censored)
          return; // row stays NaN
        built.emplace(sorted.x(), std::move(w), sorted.delta());
      }
      const WeightedSample& sample = *built;

      // bandwidths; a failed selector blanks its own columns only
      std::vector<double> hs(selectors.size(), kNaN);
      try {
        hs[0] = h_normal_ref(sample).h;
      } catch (const Error&) {
      }
      try {
        hs[1] = h_plugin(sample.x()).h;
      } catch (const Error&) {
      }
      try {
        if (!std::isnan(hs[0]))
          hs[2] = lscv_search(sample, hs[0]).h;
      } catch (const Error&) {
      }

      for (std::size_t si = 0; si < selectors.size(); ++si) {
        if (std::isnan(hs[si]))
          continue;
        const std::size_t base = si * variants;
        try {
          const DensityEstimate d = wkde_eval(sample, hs[si], grid);
          rows[rep][base] = l1_distance(d, pdf).l1;
        } catch (const Error&) {
        }
        for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
          try {
            const DensityEstimate d =
              awkde_eval(sample, hs[si], cfg.alphas[ai], grid);
            rows[rep][base + 1 + ai] = l1_distance(d, pdf).l1;
          } catch (const Error&) {
          }
        }
      }
    });

    for (std::size_t si = 0; si < selectors.size(); ++si) {
      for (std::size_t vi = 0; vi < variants; ++vi) {
        Cell c;
        c.scenario = to_string(cfg.scenario);
        c.n = n;
        c.selector = selectors[si];
        c.variant = vi == 0 ? "wkde"
                            : "awkde-" + [&]() {
                                char b[32];
                                std::snprintf(b, sizeof(b), "%g",
                                              cfg.alphas[vi - 1]);
                                return std::string(b);
                              }();
        c.seed = cfg.seed;
        aggregate_column(rows, si * variants + vi, c.mean_l1, c.se, c.reps);
        result.cells.push_back(c);
      }
    }
    progress_line(cfg, to_string(cfg.scenario) + " n=" + std::to_string(n),
                  watch.seconds());
  }
  return result;
}

ExperimentResult run_part2(const ExperimentConfig& cfg)
{
  if (cfg.scenario != Scenario::kp_normal &&
      cfg.scenario != Scenario::kp_exponential &&
      cfg.scenario != Scenario::kp_weibull)
    throw Error("InvalidScenario", "run_part2 handles the locally banded "
                                   "comparison scenarios only");
  if (cfg.reps < 1)
    throw Error("InvalidOptions", "need reps >= 1");

  const TargetDist target = part1_target(cfg.scenario);
  const std::vector<std::size_t> sizes =
    cfg.sizes.empty() ? default_sizes(cfg.scenario) : cfg.sizes;
  const std::vector<double> grid = metric_grid(target, cfg.grid_m);
  const auto pdf = [&](double v) { return target.pdf(v); };
  const double scale = calibrate_censoring_scale(
    target, TargetDist::Family::exponential, cfg.censor_rate);
  const TargetDist cens =
    censoring_dist(target, TargetDist::Family::exponential, scale);

  // column layout: kp, nrd, exp, dpi
  const std::vector<std::pair<std::string, std::string>> labels = {
    { "kp", "kp" }, { "nrd", "wkde" }, { "exp", "wkde" }, { "dpi", "wkde" }
  };

  ExperimentResult result;
  for (std::size_t cell_idx = 0; cell_idx < sizes.size(); ++cell_idx) {
    const std::size_t n = sizes[cell_idx];
    if (n < 5)
      throw Error("InvalidOptions", "need n >= 5");
    Stopwatch watch;
    std::vector<std::vector<double>> rows(
      cfg.reps, std::vector<double>(labels.size(), kNaN));

    parallel_replicates(cfg.reps, cfg.threads, [&](std::size_t rep) {
      Rng rng(Rng::stream_seed(cfg.seed, cell_idx * cfg.reps + rep));
      const std::vector<double> t = target.sample(n, rng);
      const CensoringResult cr = censor_with(t, cens, rng);

      bool all_censored = false;
      WeightedSample sorted = WeightedSample::uniform(cr.x, cr.delta);
      std::vector<double> w =
        km_weights(sorted.x(), sorted.delta(), &all_censored);
      if (all_censored)
        return; // row stays NaN
      const WeightedSample sample(sorted.x(), std::move(w), sorted.delta());

      try {
        const DensityEstimate d = kp_estimate(cr.x, cr.delta, grid);
        rows[rep][0] = l1_distance(d, pdf).l1;
      } catch (const Error&) {
      }
      const auto try_wkde = [&](std::size_t col, auto&& make_h) {
        try {
          const double h = make_h();
          rows[rep][col] = l1_distance(wkde_eval(sample, h, grid), pdf).l1;
        } catch (const Error&) {
        }
      };
      try_wkde(1, [&] { return h_normal_ref(sample).h; });
      try_wkde(2, [&] { return h_exp_ref(sample).h; });
      try_wkde(3, [&] { return h_plugin(sample.x()).h; });
    });

    for (std::size_t col = 0; col < labels.size(); ++col) {
      Cell c;
      c.scenario = to_string(cfg.scenario);
      c.n = n;
      c.selector = labels[col].first;
      c.variant = labels[col].second;
      c.seed = cfg.seed;
      aggregate_column(rows, col, c.mean_l1, c.se, c.reps);
      result.cells.push_back(c);
    }
    progress_line(cfg, to_string(cfg.scenario) + " n=" + std::to_string(n),
                  watch.seconds());
  }
  return result;
}

ExperimentResult run_biased(const ExperimentConfig& cfg)
{
  if (cfg.scenario != Scenario::biased_sampling)
    throw Error("InvalidScenario", "run_biased handles the biased-sampling "
                                   "scenario only");
  if (cfg.reps < 1)
    throw Error("InvalidOptions", "need reps >= 1");
  const std::size_t n =
    cfg.sizes.empty() ? default_sizes(cfg.scenario)[0] : cfg.sizes[0];

  struct SubCell {
    std::string name;
    TargetDist target;
    bool step_bias;
  };
  const std::vector<SubCell> sub = {
    { "bias-normal10.2-b1", TargetDist::normal(10.0, 2.0), false },
    { "bias-normal10.2-b2", TargetDist::normal(10.0, 2.0), true },
    { "bias-weibull2.1-b1", TargetDist::weibull(2.0, 1.0), false },
    { "bias-weibull2.1-b2", TargetDist::weibull(2.0, 1.0), true },
  };

  ExperimentResult result;
  for (std::size_t cell_idx = 0; cell_idx < sub.size(); ++cell_idx) {
    const auto& sc = sub[cell_idx];
    const double grid_lo = sc.target.quantile(1e-4);
    const double grid_hi = sc.target.quantile(1.0 - 1e-4);
    const auto pdf = [&](double v) { return sc.target.pdf(v); };
    const std::function<double(double)> bias =
      sc.step_bias ? biasing_b2(sc.target) : biasing_b1(sc.target);
    Stopwatch watch;

    std::vector<std::vector<double>> rows(cfg.reps,
                                          std::vector<double>(2, kNaN));
    parallel_replicates(cfg.reps, cfg.threads, [&](std::size_t rep) {
      Rng rng(Rng::stream_seed(cfg.seed, cell_idx * cfg.reps + rep));
      const std::vector<double> full = sc.target.sample(n, rng);
      const std::vector<double> kept = biased_thin(full, bias, rng);
      if (kept.size() < 5)
        return;
      // the comparison grid is floored at the smallest kept observation:
      // below it the thinned sample carries no information and the
      // divide-by-bias estimate diverges where the bias vanishes
      const double lo =
        std::max(grid_lo, *std::min_element(kept.begin(), kept.end()));
      const std::vector<double> grid = linspace(lo, grid_hi, cfg.grid_m);
      try {
        const double h = h_plugin(kept).h;
        rows[rep][0] = l1_distance(biased_fb(kept, bias, h, grid), pdf).l1;
        rows[rep][1] = l1_distance(biased_fwu(kept, bias, h, grid), pdf).l1;
      } catch (const Error&) {
      }
    });

    for (std::size_t col = 0; col < 2; ++col) {
      Cell c;
      c.scenario = sc.name;
      c.n = n;
      c.selector = "dpi";
      c.variant = col == 0 ? "fb" : "fwu";
      c.seed = cfg.seed;
      aggregate_column(rows, col, c.mean_l1, c.se, c.reps);
      result.cells.push_back(c);
    }
    progress_line(cfg, sc.name, watch.seconds());
  }
  return result;
}

namespace {

// regularized incomplete beta via Lentz's continued fraction, for the
// two-sided t-test p-value of the residual regression slope
double ibeta_cf(double a, double b, double x)
{
  const double eps = 1e-14;
  const double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny)
    d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny)
      d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny)
      d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps)
      break;
  }
  return h;
}

double ibeta(double a, double b, double x)
{
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * ibeta_cf(a, b, x) / a;
  return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double dof)
{
  return ibeta(dof / 2.0, 0.5, dof / (dof + t * t));
}

struct SimpleOls {
  double beta0 = 0.0;
  double beta1 = 0.0;
  std::vector<double> residuals;
  double p_value = 1.0;
};

SimpleOls fit_ols(const std::vector<double>& x, const std::vector<double>& y)
{
  const std::size_t n = x.size();
  if (n < 3)
    throw Error("DegenerateSample", "regression needs at least 3 points");
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= double(n);
  ym /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0))
    throw Error("DegenerateScale", "regressor has no spread");
  SimpleOls fit;
  fit.beta1 = sxy / sxx;
  fit.beta0 = ym - fit.beta1 * xm;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.beta0 + fit.beta1 * x[i]);
    rss += fit.residuals[i] * fit.residuals[i];
  }
  const double se1 = std::sqrt(rss / double(n - 2) / sxx);
  fit.p_value = t_two_sided_p(fit.beta1 / se1, double(n - 2));
  return fit;
}

} // namespace

LungMode lung_mode_from_name(const std::string& name)
{
  if (name == "mp")
    return LungMode::mp;
  if (name == "zero" || name == "zero-residual")
    return LungMode::zero_residual;
  if (name == "ultimate")
    return LungMode::ultimate;
  if (name == "windowed")
    return LungMode::windowed;
  throw Error("InvalidOptions", "unknown lung mode '" + name + "'");
}

std::string to_string(LungMode m)
{
  switch (m) {
  case LungMode::mp:
    return "mp";
  case LungMode::zero_residual:
    return "zero-residual";
  case LungMode::ultimate:
    return "ultimate";
  case LungMode::windowed:
    return "windowed";
  }
  return "?";
}

OlsFit lung_residual_fit(const std::vector<LungRecord>& data)
{
  std::vector<double> tc, tr;
  for (const auto& rec : data) {
    if (rec.death)
      continue;
    if (std::isnan(rec.ultimate))
      throw Error("MissingUltimate", "censored record lacks a follow-up time");
    tc.push_back(rec.time);
    tr.push_back(rec.ultimate - rec.time);
  }
  if (tc.size() < 5)
    throw Error("DegenerateSample", "too few censored records to fit");

  const SimpleOls full = fit_ols(tc, tr);
  std::vector<std::size_t> idx(tc.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(full.residuals[a]) > std::fabs(full.residuals[b]);
  });

  OlsFit out;
  out.excluded = { idx[0], idx[1] };
  std::vector<double> tc2, tr2;
  for (std::size_t i = 0; i < tc.size(); ++i) {
    if (i == idx[0] || i == idx[1])
      continue;
    tc2.push_back(tc[i]);
    tr2.push_back(tr[i]);
  }
  const SimpleOls refit = fit_ols(tc2, tr2);
  out.beta0 = refit.beta0;
  out.beta1 = refit.beta1;
  out.p_value = refit.p_value;
  return out;
}

LungResult run_lung_pipeline(const std::vector<LungRecord>& data,
                             LungMode mode, std::vector<double> grid)
{
  if (data.empty())
    throw Error("EmptySample", "no records");

  std::vector<double> times;
  std::vector<int> delta;
  times.reserve(data.size());
  for (const auto& rec : data) {
    times.push_back(rec.time);
    delta.push_back(rec.death ? 1 : 0);
  }

  // one reference bandwidth for every mode so the curves are comparable
  const double h =
    h_normal_ref(WeightedSample::uniform(times)).h;

  LungResult out;
  out.h = h;

  WeightedSample sample = [&]() {
    switch (mode) {
    case LungMode::mp: {
      WeightedSample sorted = WeightedSample::uniform(times, delta);
      std::vector<double> w = km_weights(sorted.x(), sorted.delta());
      return WeightedSample(sorted.x(), std::move(w), sorted.delta());
    }
    case LungMode::zero_residual:
      return WeightedSample::uniform(times);
    case LungMode::ultimate: {
      std::vector<double> t2;
      t2.reserve(data.size());
      for (const auto& rec : data)
        t2.push_back(rec.death ? rec.time : rec.ultimate);
      return WeightedSample::uniform(std::move(t2));
    }
    case LungMode::windowed: {
      out.fit = lung_residual_fit(data);
      WeightedSample sorted = WeightedSample::uniform(times, delta);
      std::vector<double> r_hat;
      for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted.delta()[i] == 0)
          r_hat.push_back(
            std::max(0.0, out.fit.beta0 + out.fit.beta1 * sorted.x()[i]));
      std::vector<double> w =
        redistribute_windowed(sorted.x(), sorted.delta(), r_hat);
      return WeightedSample(sorted.x(), std::move(w), sorted.delta());
    }
    }
    throw Error("InvalidOptions", "unknown lung mode");
  }();

  if (grid.empty())
    grid = linspace(0.0, sample.x().back() + 4.0 * h, 512);
  out.density = reflect_boundary(sample, h, std::move(grid));
  out.density.selector = "nrd";
  out.density.weights = to_string(mode);
  out.survival = survival_from_density(out.density);
  return out;
}

} // namespace wkde
