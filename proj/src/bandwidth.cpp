#include "wkde/bandwidth.hpp"

#include "wkde/errors.hpp"
#include "wkde/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wkde {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kGaussCut = 8.0; // matches kernel_eval truncation

double rate_factor(std::size_t n)
{
  return std::pow(double(n), -0.2);
}

double min_scale_guarded(double a, double b)
{
  // use the other measure when one collapses to zero
  const bool a_ok = a > 0.0;
  const bool b_ok = b > 0.0;
  if (a_ok && b_ok)
    return std::min(a, b);
  if (a_ok)
    return a;
  if (b_ok)
    return b;
  throw Error("DegenerateScale", "both scale measures are zero");
}

} // namespace

std::string to_string(Selector s)
{
  switch (s) {
  case Selector::normal_ref:
    return "nrd";
  case Selector::exp_ref:
    return "exp";
  case Selector::plugin:
    return "dpi";
  case Selector::lscv:
    return "lscv";
  case Selector::kp_local:
    return "kp";
  }
  return "?";
}

BandwidthResult h_normal_ref(const WeightedSample& s)
{
  if (s.size() < 2)
    throw Error("DegenerateSample", "need at least two observations");
  const double sw = std::sqrt(weighted_variance(s));
  const double iqr = weighted_iqr(s);
  const double a = min_scale_guarded(sw, iqr / 1.34);
  return { 0.9 * a * rate_factor(s.size()), Selector::normal_ref, {}, false };
}

BandwidthResult h_exp_ref(const WeightedSample& s)
{
  if (s.size() < 2)
    throw Error("DegenerateSample", "need at least two observations");
  double lambda;
  if (s.has_delta()) {
    if (s.event_count() == 0)
      throw Error("NoEvents", "all observations censored");
    lambda = std::accumulate(s.x().begin(), s.x().end(), 0.0) /
             double(s.event_count());
  } else {
    lambda = std::accumulate(s.x().begin(), s.x().end(), 0.0) /
             double(s.size());
  }
  const double iqr = weighted_iqr(s);
  const double b = min_scale_guarded(lambda > 0.0 ? lambda : 0.0, iqr / 1.34);
  return { 0.9 * b * rate_factor(s.size()), Selector::exp_ref, {}, false };
}

namespace {

// phi^(4) and phi^(6), the standard normal density derivatives used by the
// kernel functional estimates
double phi4(double t)
{
  const double t2 = t * t;
  return (t2 * t2 - 6.0 * t2 + 3.0) * std::exp(-0.5 * t2) / kSqrt2Pi;
}

double phi6(double t)
{
  const double t2 = t * t;
  return (t2 * t2 * t2 - 15.0 * t2 * t2 + 45.0 * t2 - 15.0) *
         std::exp(-0.5 * t2) / kSqrt2Pi;
}

template<typename F>
double pair_functional(const std::vector<double>& x, double g, F&& f)
{
  // sum over all ordered pairs including i == j, using symmetry
  const std::size_t n = x.size();
  double acc = double(n) * f(0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      acc += 2.0 * f((x[i] - x[j]) / g);
  return acc;
}

} // namespace

BandwidthResult h_plugin(const std::vector<double>& x)
{
  const std::size_t n = x.size();
  if (n < 4)
    throw Error("DegenerateSample", "plug-in selection needs n >= 4");
  const double nn = double(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
  double ss = 0.0;
  for (double xi : x)
    ss += (xi - mean) * (xi - mean);
  const double sd = std::sqrt(ss / (nn - 1.0));
  if (!(sd > 0.0))
    throw Error("DegenerateScale", "observations are all equal");

  // stage 0: normal-scale psi_8 = 105 / (32 sqrt(pi) sd^9)
  const double psi8 = 105.0 / (32.0 * std::sqrt(M_PI) * std::pow(sd, 9.0));

  // stage 1: psi_6 with pilot g1 = (-2 phi6(0) / (psi8 n))^{1/9}
  const double g1 = std::pow(30.0 / (kSqrt2Pi * psi8 * nn), 1.0 / 9.0);
  const double psi6 =
    pair_functional(x, g1, phi6) / (nn * nn * std::pow(g1, 7.0));
  if (!(psi6 < 0.0))
    throw Error("DegenerateScale", "kernel functional estimate psi_6 not "
                                   "negative");

  // stage 2: psi_4 with pilot g2 = (-2 phi4(0) / (psi6 n))^{1/7}
  const double g2 = std::pow(-6.0 / (kSqrt2Pi * psi6 * nn), 1.0 / 7.0);
  const double psi4 =
    pair_functional(x, g2, phi4) / (nn * nn * std::pow(g2, 5.0));
  if (!(psi4 > 0.0))
    throw Error("DegenerateScale", "kernel functional estimate psi_4 not "
                                   "positive");

  // h = [ R(K) / (n k2^2 psi_4) ]^{1/5}, Gaussian constants
  const double h = std::pow(1.0 / (2.0 * std::sqrt(M_PI) * psi4 * nn), 0.2);
  return { h, Selector::plugin, {}, false };
}

double lscv_objective(const WeightedSample& s, double h, bool strict)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  const std::size_t n = s.size();
  if (n < 2)
    throw Error("DegenerateSample", "LSCV needs n >= 2");
  const auto& x = s.x();
  const auto& w = s.w();
  const double total = s.total_weight();

  // exact integral of fhat^2 via the Gaussian self-convolution, plus the
  // leave-one-out values fhat(X_i); both accumulated over the truncation
  // window in one pass over sorted pairs
  const double hc = M_SQRT2 * h;
  const double window = kGaussCut * std::max(h, hc);
  const double diag_conv = kernel_eval(KernelSpec::gaussian(), 0.0) / hc;
  const double diag_h = kernel_eval(KernelSpec::gaussian(), 0.0) / h;

  double conv_sum = 0.0;
  std::vector<double> fhat(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    conv_sum += w[i] * w[i] * diag_conv;
    fhat[i] += w[i] * diag_h;
    for (std::size_t j = i + 1; j < n && x[j] - x[i] <= window; ++j) {
      const double d = x[j] - x[i];
      conv_sum += 2.0 * w[i] * w[j] *
                  kernel_eval(KernelSpec::gaussian(), d / hc) / hc;
      const double kh = kernel_eval(KernelSpec::gaussian(), d / h) / h;
      fhat[i] += w[j] * kh;
      fhat[j] += w[i] * kh;
    }
  }

  double loo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diag = strict ? w[i] / kSqrt2Pi : w[i] * diag_h;
    const double denom = strict ? 1.0 - w[i] : total - w[i];
    if (!(denom > 0.0))
      throw Error("ZeroWeight", "leave-one-out denominator vanished");
    loo += (fhat[i] - diag) / denom;
  }
  return conv_sum - (2.0 / double(n)) * loo;
}

BandwidthResult lscv_search(const WeightedSample& s, double h0,
                            const LscvOptions& opts)
{
  if (!(h0 > 0.0))
    throw Error("NonPositiveBandwidth", "seed bandwidth must be positive");
  if (opts.rounds < 1 || opts.grid_n < 5)
    throw Error("InvalidOptions", "need rounds >= 1 and grid_n >= 5");

  BandwidthResult result;
  result.selector = Selector::lscv;
  double lo = 0.25 * h0;
  double hi = 1.5 * h0;
  double best_h = 0.0;
  double best_value = std::numeric_limits<double>::infinity();

  for (std::size_t round = 0; round < opts.rounds; ++round) {
    const double step = (hi - lo) / double(opts.grid_n - 1);
    LscvRound rec;
    rec.lo = lo;
    rec.hi = hi;
    std::size_t arg = 0;
    double arg_value = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < opts.grid_n; ++g) {
      const double h = lo + double(g) * step;
      const double v = lscv_objective(s, h, opts.strict);
      if (v < arg_value) {
        arg_value = v;
        arg = g;
      }
    }
    const double h_min = lo + double(arg) * step;
    rec.best_h = h_min;
    rec.best_value = arg_value;
    rec.at_left_edge = (arg == 0);
    rec.at_right_edge = (arg == opts.grid_n - 1);
    result.trace.push_back(rec);
    if (arg_value < best_value) {
      best_value = arg_value;
      best_h = h_min;
    }

    const double delta = (hi - lo) / 20.0;
    if (rec.at_left_edge) {
      const double new_hi = lo + delta;
      lo = 0.2 * new_hi;
      hi = new_hi;
    } else if (rec.at_right_edge) {
      const double new_lo = hi - delta;
      lo = new_lo;
      hi = 5.0 * new_lo;
    } else {
      const double new_lo = (lo + h_min) / 2.0;
      const double new_hi = (hi + h_min) / 2.0;
      lo = new_lo;
      hi = new_hi;
    }
  }

  result.h = best_h;
  const auto& last = result.trace.back();
  result.edge_saturated = !(best_h > last.lo && best_h < last.hi);
  return result;
}

double h_kp_local(double x, double lambda_hat, const CensoringSurvival& Hstar,
                  std::size_t n)
{
  if (!(lambda_hat > 0.0))
    throw Error("DegenerateScale", "lambda must be positive");
  const double hs = Hstar(x);
  if (!(hs > 0.0))
    throw Error("ZeroSurvival", "censoring survival is zero at x");
  return 0.7644174 * lambda_hat * std::pow(hs, -0.2) *
         std::exp(x / (5.0 * lambda_hat)) * rate_factor(n);
}

} // namespace wkde
