#pragma once

#include "wkde/kernel.hpp"
#include "wkde/sample.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wkde {

//! Evaluation grid, density values and the bandwidth(s) that produced them.
//! h_local is filled for the adaptive and locally banded estimators.
struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> f;
  double h = 0.0;
  std::vector<double> h_local;
  std::string estimator;
  std::string selector;
  std::string weights;
};

//! Equally spaced grid of m points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t m);

//! Default evaluation grid: m points spanning [min(x) - 4h, max(x) + 4h],
//! or [0, max(x) + 4h] when nonnegative is set.
std::vector<double> default_grid(const WeightedSample& s, double h,
                                 std::size_t m = 512, bool nonnegative = false);

//! Fixed-bandwidth weighted KDE f(g) = sum_i w_i K_h(g - x_i) with the raw
//! stored weights; the estimate integrates to the total weight.
DensityEstimate wkde_eval(const WeightedSample& s, double h,
                          std::vector<double> grid,
                          const KernelSpec& kernel = KernelSpec::gaussian());

//! Adaptive weighted KDE. A pilot wKDE with bandwidth h is evaluated at the
//! data points, g is the geometric mean of the pilot values over all n points
//! and each point gets local factor lambda_i = (pilot_i / g)^{-alpha}; the
//! density is then sum_i w_i K_{h lambda_i}(t - x_i). alpha = 0 reduces to
//! wkde_eval.
DensityEstimate awkde_eval(const WeightedSample& s, double h, double alpha,
                           std::vector<double> grid,
                           const KernelSpec& kernel = KernelSpec::gaussian());

//! Boundary-reflected weighted KDE for data on [0, inf):
//! f(g) = sum_i w_i [K_h(g - x_i) + K_h(g + x_i) 1{x_i < 4h}].
DensityEstimate reflect_boundary(const WeightedSample& s, double h,
                                 std::vector<double> grid,
                                 const KernelSpec& kernel =
                                   KernelSpec::gaussian());

//! Locally banded, censoring-corrected estimator: only event points
//! contribute, each with weight 1/(n Hstar(x_i)) and its own bandwidth from
//! h_kp_local with the exponential-reference rate sum(x)/sum(delta).
DensityEstimate kp_estimate(const std::vector<double>& x,
                            const std::vector<int>& delta,
                            std::vector<double> grid);

//! Biased-sampling estimator that divides a plain KDE of the biased sample
//! by the biasing function and renormalizes to integrate to one over the
//! grid (trapezoid rule).
DensityEstimate biased_fb(const std::vector<double>& x,
                          const std::function<double(double)>& bias, double h,
                          std::vector<double> grid);

//! Biased-sampling estimator reweighting each point by 1/b(x_i). By default
//! the weights are normalized so the estimate integrates to one;
//! strict_kappa applies the constant 1/sum b(x_i) to unnormalized
//! inverse-bias kernels instead.
DensityEstimate biased_fwu(const std::vector<double>& x,
                           const std::function<double(double)>& bias, double h,
                           std::vector<double> grid,
                           bool strict_kappa = false);

//! Survival curve on the estimate's grid: 1 minus the running trapezoid
//! integral of f, clamped to [0, 1] and non-increasing.
std::vector<double> survival_from_density(const DensityEstimate& d);

} // namespace wkde
