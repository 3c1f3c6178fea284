#include "wkde/density.hpp"

#include "wkde/bandwidth.hpp"
#include "wkde/errors.hpp"
#include "wkde/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wkde {

namespace {

constexpr double kGaussCut = 8.0;

void check_grid(const std::vector<double>& grid)
{
  if (grid.size() < 2)
    throw Error("GridTooSmall", "grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error("UnsortedData", "grid must be strictly increasing");
}

double support_radius(const KernelSpec& k, double h)
{
  return (k.family == KernelFamily::gaussian ? kGaussCut : 1.0) * h;
}

// adds w * K_h(g - x0) to every grid point within the kernel support
void accumulate_kernel(std::vector<double>& f, const std::vector<double>& grid,
                       const KernelSpec& kernel, double x0, double h, double w)
{
  const double radius = support_radius(kernel, h);
  const auto first =
    std::lower_bound(grid.begin(), grid.end(), x0 - radius);
  const auto last = std::upper_bound(first, grid.end(), x0 + radius);
  for (auto it = first; it != last; ++it) {
    const std::size_t idx = std::size_t(it - grid.begin());
    f[idx] += w * kernel_eval(kernel, (*it - x0) / h) / h;
  }
}

} // namespace

std::vector<double> linspace(double lo, double hi, std::size_t m)
{
  if (m < 2)
    throw Error("GridTooSmall", "need at least two grid points");
  if (!(hi > lo))
    throw Error("InvalidGrid", "upper bound must exceed lower bound");
  std::vector<double> g(m);
  const double step = (hi - lo) / double(m - 1);
  for (std::size_t i = 0; i < m; ++i)
    g[i] = lo + double(i) * step;
  g.back() = hi;
  return g;
}

std::vector<double> default_grid(const WeightedSample& s, double h,
                                 std::size_t m, bool nonnegative)
{
  const double lo = nonnegative ? 0.0 : s.x().front() - 4.0 * h;
  const double hi = s.x().back() + 4.0 * h;
  return linspace(lo, hi, m);
}

DensityEstimate wkde_eval(const WeightedSample& s, double h,
                          std::vector<double> grid, const KernelSpec& kernel)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  check_grid(grid);
  DensityEstimate d;
  d.f.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.w()[i] > 0.0)
      accumulate_kernel(d.f, grid, kernel, s.x()[i], h, s.w()[i]);
  d.grid = std::move(grid);
  d.h = h;
  d.estimator = "wkde";
  return d;
}

DensityEstimate awkde_eval(const WeightedSample& s, double h, double alpha,
                           std::vector<double> grid, const KernelSpec& kernel)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error("InvalidSensitivity", "alpha must lie in [0, 1]");
  check_grid(grid);
  const std::size_t n = s.size();

  // pilot estimate at the data points
  std::vector<double> pilot(n, 0.0);
  const double radius = support_radius(kernel, h);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.w()[i] <= 0.0)
      continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = s.x()[j] - s.x()[i];
      if (d < -radius)
        continue;
      if (d > radius)
        break;
      pilot[j] += s.w()[i] * kernel_eval(kernel, d / h) / h;
    }
  }

  double log_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pilot[i] > 0.0))
      throw Error("ZeroPilot", "pilot density vanished at observation " +
                                 std::to_string(i));
    log_sum += std::log(pilot[i]);
  }
  const double g = std::exp(log_sum / double(n));

  DensityEstimate out;
  out.f.assign(grid.size(), 0.0);
  out.h_local.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = std::pow(pilot[i] / g, -alpha);
    const double hi = h * lambda;
    out.h_local[i] = hi;
    if (s.w()[i] > 0.0)
      accumulate_kernel(out.f, grid, kernel, s.x()[i], hi, s.w()[i]);
  }
  out.grid = std::move(grid);
  out.h = h;
  out.estimator = "awkde";
  return out;
}

DensityEstimate reflect_boundary(const WeightedSample& s, double h,
                                 std::vector<double> grid,
                                 const KernelSpec& kernel)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  check_grid(grid);
  if (s.x().front() < 0.0)
    throw Error("NegativeData", "reflection requires non-negative data");
  if (grid.front() < 0.0)
    throw Error("NegativeData", "reflection grid must be non-negative");

  DensityEstimate d;
  d.f.assign(grid.size(), 0.0);
  const double cut = 4.0 * h;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.w()[i] <= 0.0)
      continue;
    accumulate_kernel(d.f, grid, kernel, s.x()[i], h, s.w()[i]);
    if (s.x()[i] < cut)
      accumulate_kernel(d.f, grid, kernel, -s.x()[i], h, s.w()[i]);
  }
  d.grid = std::move(grid);
  d.h = h;
  d.estimator = "wkde-reflect";
  return d;
}

DensityEstimate kp_estimate(const std::vector<double>& x,
                            const std::vector<int>& delta,
                            std::vector<double> grid)
{
  check_grid(grid);
  const std::size_t n = x.size();
  if (n == 0)
    throw Error("EmptySample", "no observations");
  if (delta.size() != n)
    throw Error("LengthMismatch", "x and delta must have the same length");

  // canonical survival order
  WeightedSample s = WeightedSample::uniform(x, delta);
  if (s.event_count() == 0)
    throw Error("NoEvents", "all observations censored");
  const double lambda =
    std::accumulate(s.x().begin(), s.x().end(), 0.0) / double(s.event_count());
  if (!(lambda > 0.0))
    throw Error("DegenerateScale", "exponential rate estimate not positive");
  const CensoringSurvival Hstar(s.x(), s.delta());

  DensityEstimate d;
  d.f.assign(grid.size(), 0.0);
  d.h_local.assign(n, 0.0);
  const KernelSpec kernel = KernelSpec::gaussian();
  for (std::size_t i = 0; i < n; ++i) {
    if (s.delta()[i] != 1)
      continue;
    const double hi = h_kp_local(s.x()[i], lambda, Hstar, n);
    d.h_local[i] = hi;
    const double wi = 1.0 / (double(n) * Hstar(s.x()[i]));
    accumulate_kernel(d.f, grid, kernel, s.x()[i], hi, wi);
  }
  d.grid = std::move(grid);
  d.estimator = "kp";
  d.selector = "kp";
  return d;
}

DensityEstimate biased_fb(const std::vector<double>& x,
                          const std::function<double(double)>& bias, double h,
                          std::vector<double> grid)
{
  check_grid(grid);
  const std::size_t n = x.size();
  if (n == 0)
    throw Error("EmptySample", "no observations");
  DensityEstimate d = wkde_eval(WeightedSample::uniform(x), h, std::move(grid));
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    const double b = bias(d.grid[i]);
    if (!(b > 0.0))
      throw Error("ZeroBias", "biasing function must be positive on the grid");
    d.f[i] /= b;
  }
  // the normalizing constant is not observable from one sample; fix it by
  // normalizing the trapezoid integral over the grid
  double integral = 0.0;
  for (std::size_t i = 1; i < d.grid.size(); ++i)
    integral += 0.5 * (d.f[i] + d.f[i - 1]) * (d.grid[i] - d.grid[i - 1]);
  if (!(integral > 0.0))
    throw Error("DegenerateSample", "estimate integrates to zero");
  for (double& v : d.f)
    v /= integral;
  d.estimator = "fb";
  return d;
}

DensityEstimate biased_fwu(const std::vector<double>& x,
                           const std::function<double(double)>& bias, double h,
                           std::vector<double> grid, bool strict_kappa)
{
  check_grid(grid);
  if (x.empty())
    throw Error("EmptySample", "no observations");
  std::vector<double> w = biased_weights(x, bias);
  if (strict_kappa) {
    // constant 1/sum b(x_i) applied to unnormalized inverse-bias kernels
    double sum_b = 0.0;
    double sum_inv = 0.0;
    for (double xi : x) {
      sum_b += bias(xi);
      sum_inv += 1.0 / bias(xi);
    }
    for (double& wi : w)
      wi *= sum_inv / sum_b;
  }
  DensityEstimate d =
    wkde_eval(WeightedSample(x, std::move(w)), h, std::move(grid));
  d.estimator = "fwu";
  return d;
}

std::vector<double> survival_from_density(const DensityEstimate& d)
{
  check_grid(d.grid);
  std::vector<double> s(d.grid.size());
  double cum = 0.0;
  s[0] = 1.0;
  for (std::size_t i = 1; i < d.grid.size(); ++i) {
    cum += 0.5 * (d.f[i] + d.f[i - 1]) * (d.grid[i] - d.grid[i - 1]);
    const double v = std::clamp(1.0 - cum, 0.0, 1.0);
    s[i] = std::min(s[i - 1], v);
  }
  return s;
}

} // namespace wkde
