#include "wkde/weights.hpp"

#include "wkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wkde {

std::string to_string(WeightScheme s)
{
  switch (s) {
  case WeightScheme::uniform:
    return "uniform";
  case WeightScheme::kaplan_meier:
    return "km";
  case WeightScheme::biased_inverse:
    return "biased";
  case WeightScheme::redistributed:
    return "windowed";
  }
  return "?";
}

std::vector<double> uniform_weights(std::size_t n)
{
  if (n == 0)
    throw Error("EmptySample", "n must be >= 1");
  return std::vector<double>(n, 1.0 / double(n));
}

static void check_survival_input(const std::vector<double>& x,
                                 const std::vector<int>& delta)
{
  if (x.empty())
    throw Error("EmptySample", "no observations");
  if (x.size() != delta.size())
    throw Error("LengthMismatch", "x and delta must have the same length");
  if (!std::is_sorted(x.begin(), x.end()))
    throw Error("UnsortedData", "x must be sorted ascending");
}

std::vector<double> km_weights(const std::vector<double>& x,
                               const std::vector<int>& delta,
                               bool* all_censored)
{
  check_survival_input(x, delta);
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  double surv = 1.0;
  bool any_event = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double at_risk = double(n - i);
    if (delta[i] == 1) {
      w[i] = surv / at_risk;
      surv *= (at_risk - 1.0) / at_risk;
      any_event = true;
    }
  }
  if (all_censored)
    *all_censored = !any_event;
  return w;
}

CensoringSurvival::CensoringSurvival(const std::vector<double>& x,
                                     const std::vector<int>& delta)
  : knots_(x)
{
  check_survival_input(x, delta);
  const std::size_t n = x.size();
  prefix_.resize(n + 1);
  prefix_[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double factor = 1.0;
    if (delta[i] == 0)
      factor = double(n - i - 1) / double(n - i);
    prefix_[i + 1] = prefix_[i] * factor;
  }
}

double CensoringSurvival::operator()(double t) const
{
  if (t > knots_.back())
    return 0.0;
  // value on (X_(k-1), X_(k)] is the product over the first k-1 factors
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  return prefix_[std::size_t(it - knots_.begin())];
}

std::vector<double> biased_weights(const std::vector<double>& x,
                                   const std::function<double(double)>& bias)
{
  if (x.empty())
    throw Error("EmptySample", "no observations");
  std::vector<double> w(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b = bias(x[i]);
    if (!(b > 0.0))
      throw Error("ZeroBias", "biasing function must be positive at every "
                              "observation");
    w[i] = 1.0 / b;
    total += w[i];
  }
  for (double& wi : w)
    wi /= total;
  return w;
}

std::vector<double> redistribute_windowed(const std::vector<double>& x,
                                          const std::vector<int>& delta,
                                          const std::vector<double>& r_hat)
{
  check_survival_input(x, delta);
  const std::size_t n = x.size();
  const std::size_t n_cens =
    std::size_t(std::count(delta.begin(), delta.end(), 0));
  if (r_hat.size() != n_cens)
    throw Error("LengthMismatch",
                "r_hat needs one entry per censored observation");

  std::vector<double> w(n, 1.0 / double(n));
  std::vector<char> done(n, 0); // censored points already redistributed
  std::size_t cens_seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (delta[i] == 1)
      continue;
    const double r = r_hat[cens_seen++];
    if (!(r >= 0.0))
      throw Error("InvalidResidual", "predicted residuals must be >= 0");
    const double mass = w[i];
    w[i] = 0.0;
    done[i] = 1;
    if (mass == 0.0)
      continue;
    const double upper = x[i] + r;

    // recipients: observations in (x_i, upper]
    std::vector<std::size_t> window;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && x[j] > x[i] && x[j] <= upper)
        window.push_back(j);

    if (!window.empty()) {
      const double share = mass / double(window.size());
      for (std::size_t j : window)
        w[j] += share;
      continue;
    }

    // empty window: whole weight to the observation nearest the upper
    // boundary; skip censored points whose weight was already passed on,
    // mass parked there would be lost
    std::size_t best = n;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || done[j])
        continue;
      const double d = std::fabs(x[j] - upper);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == n)
      throw Error("NoTarget", "censored point has no observation to receive "
                              "its weight");
    w[best] += mass;
  }
  return w;
}

} // namespace wkde
