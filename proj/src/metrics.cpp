#include "wkde/metrics.hpp"

#include "wkde/errors.hpp"

#include <cmath>

namespace wkde {

namespace {

std::vector<double> quadrature_gaps(const std::vector<double>& y)
{
  const std::size_t m = y.size();
  if (m < 3)
    throw Error("GridTooSmall", "L1 quadrature needs at least three points");
  std::vector<double> d(m);
  d[0] = y[1] - y[0];
  d[m - 1] = y[m - 1] - y[m - 2];
  for (std::size_t i = 1; i + 1 < m; ++i)
    d[i] = 0.5 * (y[i + 1] - y[i - 1]);
  return d;
}

} // namespace

L1Report l1_distance(const DensityEstimate& fhat,
                     const std::function<double(double)>& f_true,
                     const std::function<double(double)>& cdf_true)
{
  const auto& y = fhat.grid;
  const std::vector<double> d = quadrature_gaps(y);
  L1Report report;
  report.grid_m = y.size();
  for (std::size_t i = 0; i < y.size(); ++i)
    report.l1 += std::fabs(fhat.f[i] - f_true(y[i])) * d[i];
  if (cdf_true)
    report.truncation_mass = cdf_true(y.front()) + (1.0 - cdf_true(y.back()));
  return report;
}

double l1_between(const std::vector<double>& grid,
                  const std::vector<double>& f1,
                  const std::vector<double>& f2)
{
  if (f1.size() != grid.size() || f2.size() != grid.size())
    throw Error("LengthMismatch", "values must match the grid");
  const std::vector<double> d = quadrature_gaps(grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    acc += std::fabs(f1[i] - f2[i]) * d[i];
  return acc;
}

} // namespace wkde
