#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wkde {

enum class WeightScheme { uniform, kaplan_meier, biased_inverse, redistributed };

std::string to_string(WeightScheme s);

//! All entries 1/n.
std::vector<double> uniform_weights(std::size_t n);

//! Jump sizes of the Kaplan-Meier product-limit estimator of the event-time
//! distribution: censored points get weight 0, each event point gets the
//! drop of the survival curve at its position (equivalently the
//! redistribute-to-the-right weights). The total is < 1 exactly when the
//! largest observation is censored. With no events the all-zero vector is
//! returned and *all_censored is set.
//!
//! x must be sorted ascending with events before censored points at ties.
std::vector<double> km_weights(const std::vector<double>& x,
                               const std::vector<int>& delta,
                               bool* all_censored = nullptr);

//! Product-limit step function for the censoring distribution built from the
//! three-branch definition: value 1 on [0, X_(1)], the running product
//! prod_{i<k} ((n-i)/(n-i+1))^{1-delta_i} on (X_(k-1), X_(k)], and 0 beyond
//! X_(n). operator() evaluates that function (so it equals 1 at the origin
//! and decreases); complement() gives 1 minus it.
class CensoringSurvival {
public:
  CensoringSurvival(const std::vector<double>& x,
                    const std::vector<int>& delta);

  double operator()(double t) const;
  double complement(double t) const { return 1.0 - (*this)(t); }

private:
  std::vector<double> knots_;
  std::vector<double> prefix_; // prefix_[k] = product over the first k factors
};

//! Inverse-bias weights w_i = b(x_i)^{-1} / sum_j b(x_j)^{-1}; sums to one.
//! Throws ZeroBias if any b(x_i) <= 0.
std::vector<double> biased_weights(const std::vector<double>& x,
                                   const std::function<double(double)>& bias);

//! Windowed redistribution for informative censoring. Starting from uniform
//! 1/n, censored points are processed in increasing x; the current weight of
//! censored point i is split equally among all observations in
//! (x_i, x_i + r_hat_i]. An empty window sends the whole weight to the single
//! observation nearest to x_i + r_hat_i. Weight received by a later censored
//! point cascades when that point is processed; censored points end at 0 and
//! total mass stays 1.
//!
//! x sorted ascending (events first at ties); r_hat holds one non-negative
//! predicted residual per censored point, in the same order.
std::vector<double> redistribute_windowed(const std::vector<double>& x,
                                          const std::vector<int>& delta,
                                          const std::vector<double>& r_hat);

} // namespace wkde
