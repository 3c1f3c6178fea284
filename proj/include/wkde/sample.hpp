#pragma once

#include <cstddef>
#include <vector>

namespace wkde {

//! Weighted sample: observations with per-point weights and optional event
//! indicators (1 = observed event, 0 = right-censored).
//!
//! Observations are stored sorted in non-decreasing x, with events ordered
//! before censored points at ties (the product-limit convention); weights and
//! indicators are permuted consistently and the sorting permutation is kept.
//! Weights are stored as given; they are not required to sum to one. The
//! summary statistics normalize internally.
//!
//! Immutable after construction; all operations on it are pure functions.
class WeightedSample {
public:
  WeightedSample(std::vector<double> x, std::vector<double> w);
  WeightedSample(std::vector<double> x,
                 std::vector<double> w,
                 std::vector<int> delta);

  //! Equal weights 1/n, all points treated as events.
  static WeightedSample uniform(std::vector<double> x);
  static WeightedSample uniform(std::vector<double> x, std::vector<int> delta);

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& w() const { return w_; }
  bool has_delta() const { return has_delta_; }
  //! Event indicators; all ones when none were supplied.
  const std::vector<int>& delta() const { return delta_; }
  //! order()[i] = position of the i-th sorted observation in the input.
  const std::vector<std::size_t>& order() const { return order_; }

  double total_weight() const { return total_weight_; }
  std::size_t event_count() const { return event_count_; }

private:
  void init();

  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<int> delta_;
  std::vector<std::size_t> order_;
  bool has_delta_ = false;
  double total_weight_ = 0.0;
  std::size_t event_count_ = 0;
};

//! Weighted mean with weights normalized to sum to one.
double weighted_mean(const WeightedSample& s);

//! Weighted variance sum_i w*_i (x_i - mu_w)^2 with normalized weights. All
//! mass on a single point yields 0 and sets *degenerate when provided.
double weighted_variance(const WeightedSample& s, bool* degenerate = nullptr);

//! Weighted quantile on the order statistics: with q the largest index whose
//! normalized cumulative weight is <= p and r the remainder p minus that
//! cumulative weight, returns X_(q) + r * (X_(q+1) - X_(q)). When even the
//! first weight exceeds p the smallest observation is returned.
double weighted_quantile(const WeightedSample& s, double p);

//! Q_3w - Q_1w under the rule above.
double weighted_iqr(const WeightedSample& s);

} // namespace wkde
