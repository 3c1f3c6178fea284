#pragma once

#include "wkde/density.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace wkde {

struct L1Report {
  double l1 = 0.0;
  std::size_t grid_m = 0;
  double truncation_mass = 0.0; // true mass outside [y_1, y_m]
};

//! L1 distance between a density estimate and an evaluable true density,
//! integrated with the midpoint-gap quadrature weights
//! d_i = (y_{i+1} - y_{i-1})/2, d_1 = y_2 - y_1, d_m = y_m - y_{m-1}.
//! When the true CDF is supplied the report carries the mass outside the
//! grid.
L1Report l1_distance(const DensityEstimate& fhat,
                     const std::function<double(double)>& f_true,
                     const std::function<double(double)>& cdf_true = {});

//! Same quadrature for two sets of values on one grid (symmetric in f1, f2).
double l1_between(const std::vector<double>& grid,
                  const std::vector<double>& f1,
                  const std::vector<double>& f2);

} // namespace wkde
