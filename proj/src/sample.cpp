#include "wkde/sample.hpp"

#include "wkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wkde {

WeightedSample::WeightedSample(std::vector<double> x, std::vector<double> w)
  : x_(std::move(x))
  , w_(std::move(w))
{
  delta_.assign(x_.size(), 1);
  init();
}

WeightedSample::WeightedSample(std::vector<double> x,
                               std::vector<double> w,
                               std::vector<int> delta)
  : x_(std::move(x))
  , w_(std::move(w))
  , delta_(std::move(delta))
  , has_delta_(true)
{
  if (delta_.size() != x_.size())
    throw Error("LengthMismatch", "delta and x must have the same length");
  init();
}

WeightedSample WeightedSample::uniform(std::vector<double> x)
{
  const std::size_t n = x.size();
  if (n == 0)
    throw Error("EmptySample", "no observations");
  return WeightedSample(std::move(x), std::vector<double>(n, 1.0 / double(n)));
}

WeightedSample WeightedSample::uniform(std::vector<double> x,
                                       std::vector<int> delta)
{
  const std::size_t n = x.size();
  if (n == 0)
    throw Error("EmptySample", "no observations");
  return WeightedSample(std::move(x), std::vector<double>(n, 1.0 / double(n)),
                        std::move(delta));
}

void WeightedSample::init()
{
  const std::size_t n = x_.size();
  if (n == 0)
    throw Error("EmptySample", "no observations");
  if (w_.size() != n)
    throw Error("LengthMismatch", "w and x must have the same length");

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(w_[i]))
      throw Error("NonFiniteValue", "x and w must be finite");
    if (w_[i] < 0.0)
      throw Error("NegativeWeight", "weights must be non-negative");
    if (delta_[i] != 0 && delta_[i] != 1)
      throw Error("InvalidIndicator", "delta entries must be 0 or 1");
  }

  // Stable sort by x; events before censored at ties.
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{ 0 });
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) {
                     if (x_[a] != x_[b])
                       return x_[a] < x_[b];
                     return delta_[a] > delta_[b];
                   });

  std::vector<double> xs(n), ws(n);
  std::vector<int> ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x_[order_[i]];
    ws[i] = w_[order_[i]];
    ds[i] = delta_[order_[i]];
  }
  x_ = std::move(xs);
  w_ = std::move(ws);
  delta_ = std::move(ds);

  total_weight_ = std::accumulate(w_.begin(), w_.end(), 0.0);
  if (!(total_weight_ > 0.0))
    throw Error("ZeroWeight", "at least one weight must be positive");
  event_count_ = std::size_t(
    std::count(delta_.begin(), delta_.end(), 1));
}

double weighted_mean(const WeightedSample& s)
{
  double m = 0.0;
  const double tw = s.total_weight();
  for (std::size_t i = 0; i < s.size(); ++i)
    m += (s.w()[i] / tw) * s.x()[i];
  return m;
}

double weighted_variance(const WeightedSample& s, bool* degenerate)
{
  const double mu = weighted_mean(s);
  const double tw = s.total_weight();
  double v = 0.0;
  bool spread = false;
  double anchor = 0.0;
  bool have_anchor = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.w()[i] > 0.0) {
      if (!have_anchor) {
        anchor = s.x()[i];
        have_anchor = true;
      } else if (s.x()[i] != anchor) {
        spread = true;
      }
    }
    const double d = s.x()[i] - mu;
    v += (s.w()[i] / tw) * d * d;
  }
  if (degenerate)
    *degenerate = !spread;
  if (!spread)
    return 0.0;
  return v;
}

double weighted_quantile(const WeightedSample& s, double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw Error("InvalidProbability", "p must lie in (0, 1)");
  const std::size_t n = s.size();
  const double tw = s.total_weight();
  if (n == 1)
    return s.x()[0];

  // Largest q with cumulative normalized weight <= p.
  std::size_t q = 0;
  double cum = 0.0;
  double cum_at_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cum += s.w()[i] / tw;
    if (cum <= p) {
      q = i + 1; // 1-based
      cum_at_q = cum;
    } else {
      break;
    }
  }
  if (q == 0)
    return s.x()[0];
  if (q >= n)
    q = n - 1; // guard against cumulative rounding at p near 1
  const double r = p - cum_at_q;
  return s.x()[q - 1] + r * (s.x()[q] - s.x()[q - 1]);
}

double weighted_iqr(const WeightedSample& s)
{
  return weighted_quantile(s, 0.75) - weighted_quantile(s, 0.25);
}

} // namespace wkde
