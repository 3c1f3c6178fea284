#pragma once

#include "wkde/density.hpp"
#include "wkde/distributions.hpp"
#include "wkde/lung.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wkde {

enum class Scenario {
  complete_normal,  // N(13, 3^2), complete data
  censored_normal,  // N(13, 3^2), 30% censored, product-limit weights
  censored_weibull, // Weibull(2, 1), 30% censored
  kp_normal,        // locally banded comparison, N(13, 3^2)
  kp_exponential,   // locally banded comparison, Exponential(1)
  kp_weibull,       // locally banded comparison, Weibull(2, 1)
  biased_sampling   // thinned samples, fb vs fwu
};

std::string to_string(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::complete_normal;
  std::vector<std::size_t> sizes;                    // empty = scenario default
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
  std::vector<double> alphas = { 0.3, 0.4, 0.5, 0.6, 0.7 };
  double censor_rate = 0.3;
  std::size_t grid_m = 1024;
  unsigned threads = 0;                              // 0 = all cores
  std::ostream* progress = nullptr;                  // optional progress lines
};

std::vector<std::size_t> default_sizes(Scenario s);

//! One aggregated table cell: mean L1 distance and the standard error of the
//! mean for a (selector, estimator-variant, n) combination.
struct Cell {
  std::string scenario;
  std::size_t n = 0;
  std::string selector;
  std::string variant;
  double mean_l1 = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::vector<Cell> cells;

  //! First cell matching (n, selector, variant); throws if absent.
  const Cell& cell(std::size_t n, const std::string& selector,
                   const std::string& variant) const;
  //! Smallest mean L1 over the adaptive variants of a selector.
  double best_adaptive(std::size_t n, const std::string& selector) const;
  void write_csv(std::ostream& os) const;
};

//! Fixed-bandwidth vs adaptive comparison under the reference, plug-in and
//! cross-validation selectors (complete or censored scenarios).
ExperimentResult run_part1(const ExperimentConfig& cfg);

//! Reference/plug-in bandwidths vs the locally banded censoring-corrected
//! estimator at 30% censoring.
ExperimentResult run_part2(const ExperimentConfig& cfg);

//! Biased-sampling comparison of the divide-by-b and inverse-bias-weight
//! estimators under smooth (b1) and step (b2) thinning for Weibull(2,1) and
//! N(10,2) targets.
ExperimentResult run_biased(const ExperimentConfig& cfg);

enum class LungMode { mp, zero_residual, ultimate, windowed };

LungMode lung_mode_from_name(const std::string& name);
std::string to_string(LungMode m);

struct OlsFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double p_value = 1.0;
  std::vector<std::size_t> excluded; // indices into the censored records
};

//! Least-squares fit of the follow-up residual on the censored time over the
//! removed patients, after dropping the two points with the largest absolute
//! residuals from a first full fit.
OlsFit lung_residual_fit(const std::vector<LungRecord>& data);

struct LungResult {
  DensityEstimate density;
  std::vector<double> survival;
  OlsFit fit;      // windowed mode only
  double h = 0.0;  // common reference bandwidth
};

//! Density and survival-curve estimate from the lung data under one of four
//! censoring treatments: product-limit weights (mp), death at removal
//! (zero_residual), death at the follow-up time (ultimate), or windowed
//! redistribution driven by the fitted residual model (windowed). All modes
//! share the normal-reference bandwidth of the observed times and reflect at
//! the origin. An empty grid picks [0, max + 4h] with 512 points.
LungResult run_lung_pipeline(const std::vector<LungRecord>& data,
                             LungMode mode, std::vector<double> grid = {});

} // namespace wkde
