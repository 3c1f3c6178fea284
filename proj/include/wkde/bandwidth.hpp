#pragma once

#include "wkde/sample.hpp"
#include "wkde/weights.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wkde {

enum class Selector { normal_ref, exp_ref, plugin, lscv, kp_local };

std::string to_string(Selector s);

//! One round of the LSCV grid search: the interval, its grid argmin and the
//! objective value there, and whether the argmin sat on an edge.
struct LscvRound {
  double lo = 0.0;
  double hi = 0.0;
  double best_h = 0.0;
  double best_value = 0.0;
  bool at_left_edge = false;
  bool at_right_edge = false;
};

struct BandwidthResult {
  double h = 0.0;
  Selector selector = Selector::normal_ref;
  std::vector<LscvRound> trace; // LSCV only
  bool edge_saturated = false;  // LSCV: final h not interior to last interval
};

//! Normal-reference rough bandwidth h = 0.9 min(s_w, IQR_w/1.34) n^{-1/5}.
//! If one of the two scale measures is zero the other is used; both zero is
//! a DegenerateScale error. n counts all observations, censored included.
BandwidthResult h_normal_ref(const WeightedSample& s);

//! Exponential-reference rough bandwidth h = 0.9 min(lambda, IQR_w/1.34)
//! n^{-1/5} with lambda = sum(x)/sum(delta) under censoring and the plain
//! mean for complete data.
BandwidthResult h_exp_ref(const WeightedSample& s);

//! Two-stage direct plug-in bandwidth for a Gaussian kernel on unweighted
//! observations. Weights and censoring are deliberately ignored.
BandwidthResult h_plugin(const std::vector<double>& x);

//! Least-squares cross-validation objective at bandwidth h (Gaussian kernel,
//! raw weights):
//!
//!   sum_i sum_j w_i w_j K_{sqrt(2) h}(X_i - X_j)
//!     - (2/n) sum_i (fhat(X_i) - w_i K_h(0)) / sum_{j != i} w_j
//!
//! strict switches the subtracted diagonal to w_i / sqrt(2 pi) (no 1/h
//! factor) and the denominator to 1 - w_i.
double lscv_objective(const WeightedSample& s, double h, bool strict = false);

struct LscvOptions {
  std::size_t rounds = 5;   // grid-search rounds
  std::size_t grid_n = 21;  // points per round, endpoints included
  bool strict = false;
};

//! Expanding grid search for the LSCV bandwidth seeded at h0 (normally the
//! normal- or exponential-reference value). Round one scans
//! [0.25 h0, 1.5 h0]; an argmin on the left edge moves the window to
//! [0.2 (lo + d), lo + d], one on the right edge to [hi - d, 5 (hi - d)],
//! and an interior argmin halves the window around it, with d one grid
//! spacing (range/20). Returns the best h seen across all rounds with the
//! full trace.
BandwidthResult lscv_search(const WeightedSample& s, double h0,
                            const LscvOptions& opts = {});

//! Local bandwidth 0.7644174 lambda Hstar(x)^{-1/5} e^{x/(5 lambda)} n^{-1/5}
//! used by the locally banded censoring-corrected estimator. Hstar is the
//! censoring survival (1 at the origin). Throws ZeroSurvival where Hstar is 0
//! (beyond the last observation).
double h_kp_local(double x, double lambda_hat, const CensoringSurvival& Hstar,
                  std::size_t n);

} // namespace wkde
