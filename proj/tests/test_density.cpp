#include "wkde/density.hpp"
#include "wkde/errors.hpp"
#include "wkde/weights.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using wkde::DensityEstimate;
using wkde::WeightedSample;

namespace {

double trapezoid(const std::vector<double>& grid, const std::vector<double>& f)
{
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
  return acc;
}

} // namespace

TEST_CASE("wkde on a single point is the kernel")
{
  const WeightedSample s({ 0.0 }, { 1.0 });
  const DensityEstimate d = wkde::wkde_eval(s, 1.0, { -1.0, 0.0, 1.0 });
  CHECK(d.f[1] == doctest::Approx(0.39894).epsilon(1e-4));
  CHECK(d.f[2] == doctest::Approx(0.24197).epsilon(1e-4));
}

TEST_CASE("wkde mixes raw weights")
{
  const WeightedSample s({ -1.0, 1.0 }, { 0.3, 0.7 });
  const DensityEstimate d = wkde::wkde_eval(s, 1.0, { 0.0 , 5.0 });
  CHECK(d.f[0] == doctest::Approx(0.24197).epsilon(1e-4));
}

TEST_CASE("equal weights reduce to the plain KDE")
{
  std::mt19937 gen(31);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 10 + gen() % 50;
    std::vector<double> x(n);
    for (double& xi : x)
      xi = nd(gen);
    const WeightedSample s = WeightedSample::uniform(x);
    const double h = 0.4 + 0.2 * rep;
    const std::vector<double> grid = wkde::linspace(-8.0, 8.0, 301);
    const DensityEstimate d = wkde::wkde_eval(s, h, grid);
    const std::vector<double> ref = oracle::plain_kde(x, h, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(d.f[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("adaptive estimate with alpha zero is the fixed estimate")
{
  std::mt19937 gen(32);
  std::exponential_distribution<double> ed(1.0);
  std::vector<double> x(40);
  for (double& xi : x)
    xi = ed(gen);
  const WeightedSample s = WeightedSample::uniform(x);
  const std::vector<double> grid = wkde::linspace(-1.0, 8.0, 200);
  const DensityEstimate fixed = wkde::wkde_eval(s, 0.3, grid);
  const DensityEstimate adaptive = wkde::awkde_eval(s, 0.3, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(adaptive.f[i] == doctest::Approx(fixed.f[i]).epsilon(1e-12));
}

TEST_CASE("equal pilot values make the local factors trivial")
{
  // two symmetric points see identical pilot density, so any alpha leaves
  // the bandwidths unchanged
  const WeightedSample s({ -1.0, 1.0 }, { 0.5, 0.5 });
  const std::vector<double> grid = wkde::linspace(-5.0, 5.0, 101);
  const DensityEstimate fixed = wkde::wkde_eval(s, 0.8, grid);
  const DensityEstimate adaptive = wkde::awkde_eval(s, 0.8, 0.7, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(adaptive.f[i] == doctest::Approx(fixed.f[i]).epsilon(1e-12));
  CHECK(adaptive.h_local[0] == doctest::Approx(0.8));
}

TEST_CASE("adaptive estimate matches a straight transcription")
{
  const std::vector<double> x = { 0.0, 1.0, 1.4 };
  const std::vector<double> w = { 0.5, 0.3, 0.2 };
  const double h = 0.6;
  const double alpha = 0.5;
  const WeightedSample s(x, w);

  // transcription: pilot, geometric mean, local factors, final sum
  const auto kh = [](double h_, double u) {
    return oracle::dnorm(u / h_) / h_;
  };
  std::vector<double> pilot(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      pilot[i] += w[j] * kh(h, x[i] - x[j]);
  const double g =
    std::exp((std::log(pilot[0]) + std::log(pilot[1]) + std::log(pilot[2])) /
             3.0);
  std::vector<double> lam(3);
  for (int i = 0; i < 3; ++i)
    lam[i] = std::pow(pilot[i] / g, -alpha);

  const std::vector<double> grid = { -0.5, 0.3, 0.9, 2.0 };
  const DensityEstimate got = wkde::awkde_eval(s, h, alpha, grid);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double want = 0.0;
    for (int i = 0; i < 3; ++i)
      want += w[i] * kh(h * lam[i], grid[gi] - x[i]);
    CHECK(got.f[gi] == doctest::Approx(want).epsilon(1e-12));
  }
  for (int i = 0; i < 3; ++i)
    CHECK(got.h_local[i] == doctest::Approx(h * lam[i]).epsilon(1e-12));
}

TEST_CASE("reflection doubles mass at the origin")
{
  const WeightedSample s({ 0.0 }, { 1.0 });
  const DensityEstimate d = wkde::reflect_boundary(s, 1.0, { 0.0, 1.0 });
  CHECK(d.f[0] == doctest::Approx(2.0 * 0.3989422804).epsilon(1e-9));
}

TEST_CASE("reflection is inert away from the boundary")
{
  const WeightedSample s({ 5.0, 6.0, 7.5 }, { 0.4, 0.4, 0.2 });
  const std::vector<double> grid = wkde::linspace(0.0, 12.0, 200);
  const DensityEstimate reflected = wkde::reflect_boundary(s, 1.0, grid);
  const DensityEstimate plain = wkde::wkde_eval(s, 1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(reflected.f[i] == doctest::Approx(plain.f[i]).epsilon(1e-13));
}

TEST_CASE("reflection sums the mirrored kernel")
{
  const WeightedSample s({ 0.1 }, { 1.0 });
  const DensityEstimate d = wkde::reflect_boundary(s, 1.0, { 0.0, 0.2, 5.0 });
  const double want = oracle::dnorm(0.1) + oracle::dnorm(0.3);
  CHECK(d.f[1] == doctest::Approx(want).epsilon(1e-9));
  CHECK_THROWS_AS(
    wkde::reflect_boundary(WeightedSample({ -0.5 }, { 1.0 }), 1.0,
                           { 0.0, 1.0 }),
    wkde::Error);
}

TEST_CASE("reflection conserves mass")
{
  std::mt19937 gen(55);
  std::weibull_distribution<double> wd(2.0, 1.0);
  std::vector<double> x(60);
  for (double& xi : x)
    xi = wd(gen);
  std::vector<int> delta(60, 1);
  for (std::size_t i = 0; i < 20; ++i)
    delta[i * 3] = 0;
  const WeightedSample sorted = WeightedSample::uniform(x, delta);
  const WeightedSample s(sorted.x(),
                         wkde::km_weights(sorted.x(), sorted.delta()),
                         sorted.delta());
  const double h = 0.25;
  const std::vector<double> grid =
    wkde::linspace(0.0, sorted.x().back() + 9.0 * h, 4001);
  const DensityEstimate d = wkde::reflect_boundary(s, h, grid);
  CHECK(trapezoid(d.grid, d.f) ==
        doctest::Approx(s.total_weight()).epsilon(1e-3));
}

TEST_CASE("locally banded estimator reduces to a variable-bandwidth KDE")
{
  std::mt19937 gen(66);
  std::exponential_distribution<double> ed(1.0);
  std::vector<double> x(30);
  double mean = 0.0;
  for (double& xi : x) {
    xi = ed(gen);
    mean += xi;
  }
  mean /= 30.0;
  std::sort(x.begin(), x.end());
  const std::vector<int> delta(30, 1);
  const std::vector<double> grid = wkde::linspace(0.0, 6.0, 101);
  const DensityEstimate d = wkde::kp_estimate(x, delta, grid);

  // transcription with Hstar identically one
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double want = 0.0;
    for (double xi : x) {
      const double h = 0.7644174 * mean * std::exp(xi / (5.0 * mean)) *
                       std::pow(30.0, -0.2);
      const double t = (grid[gi] - xi) / h;
      if (std::fabs(t) <= 8.0)
        want += oracle::dnorm(t) / (30.0 * h);
    }
    CHECK(d.f[gi] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("locally banded estimator drops censored points")
{
  const std::vector<double> x = { 1.0, 2.0 };
  const std::vector<int> delta = { 1, 0 };
  const std::vector<double> grid = wkde::linspace(0.0, 4.0, 41);
  const DensityEstimate d = wkde::kp_estimate(x, delta, grid);

  const double lambda = 3.0; // (1+2)/1
  const double h = 0.7644174 * lambda * std::exp(1.0 / (5.0 * lambda)) *
                   std::pow(2.0, -0.2);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double want = oracle::dnorm((grid[gi] - 1.0) / h) / (2.0 * h);
    CHECK(d.f[gi] == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS_AS(wkde::kp_estimate({ 1.0, 2.0 }, { 0, 0 }, grid),
                  wkde::Error);
}

TEST_CASE("divide-by-bias estimator")
{
  std::mt19937 gen(41);
  std::normal_distribution<double> nd(5.0, 1.0);
  std::vector<double> x(50);
  for (double& xi : x)
    xi = nd(gen);
  const std::vector<double> grid = wkde::linspace(0.0, 10.0, 1001);

  // constant bias: the normalized estimate is the plain KDE rescaled by its
  // own grid integral
  const DensityEstimate fb =
    wkde::biased_fb(x, [](double) { return 1.0; }, 0.5, grid);
  CHECK(trapezoid(fb.grid, fb.f) == doctest::Approx(1.0).epsilon(1e-6));
  const std::vector<double> ref = oracle::plain_kde(x, 0.5, grid);
  std::vector<double> refn = ref;
  const double mass = trapezoid(grid, ref);
  for (double& v : refn)
    v /= mass;
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(fb.f[i] == doctest::Approx(refn[i]).epsilon(1e-9));

  // a step in the bias leaves a step in the estimate
  const auto step = [](double t) { return t <= 5.0 ? 0.5 : 1.0; };
  const DensityEstimate fb2 = wkde::biased_fb(x, step, 0.5, grid);
  std::size_t jump = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i - 1] <= 5.0 && grid[i] > 5.0)
      jump = i;
  const double before = fb2.f[jump - 1];
  const double after = fb2.f[jump];
  CHECK(std::fabs(after - before) > 5.0 * std::fabs(fb2.f[jump - 2] - before));

  CHECK_THROWS_AS(
    wkde::biased_fb(x, [](double t) { return t - 5.0; }, 0.5, grid),
    wkde::Error);
}

TEST_CASE("inverse-bias-weight estimator")
{
  std::mt19937 gen(42);
  std::weibull_distribution<double> wd(2.0, 1.0);
  std::vector<double> x(50);
  for (double& xi : x)
    xi = 0.05 + wd(gen);
  const std::vector<double> grid = wkde::linspace(-3.0, 6.0, 16384);
  const double h = 0.3;

  const DensityEstimate fwu =
    wkde::biased_fwu(x, [](double) { return 0.4; }, h, grid);
  const std::vector<double> ref = oracle::plain_kde(x, h, grid);
  for (std::size_t i = 0; i < grid.size(); i += 37)
    CHECK(fwu.f[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  CHECK(trapezoid(fwu.grid, fwu.f) == doctest::Approx(1.0).epsilon(1e-6));

  // composition with the inverse-bias weights
  const std::vector<double> x3 = { 1.0, 1.0, 2.0 };
  const auto bias = [](double t) { return t; };
  const std::vector<double> g3 = wkde::linspace(0.0, 3.0, 31);
  const DensityEstimate direct = wkde::biased_fwu(x3, bias, 0.5, g3);
  const WeightedSample weighted(x3, wkde::biased_weights(x3, bias));
  const DensityEstimate via = wkde::wkde_eval(weighted, 0.5, g3);
  for (std::size_t i = 0; i < g3.size(); ++i)
    CHECK(direct.f[i] == doctest::Approx(via.f[i]).epsilon(1e-13));
}

TEST_CASE("strict constant for the inverse-bias estimator")
{
  const std::vector<double> x = { 0.5, 1.0, 2.0 };
  const auto bias = [](double t) { return t / 2.0; };
  const std::vector<double> grid = wkde::linspace(-1.0, 4.0, 51);
  const DensityEstimate norm = wkde::biased_fwu(x, bias, 0.4, grid);
  const DensityEstimate strict = wkde::biased_fwu(x, bias, 0.4, grid, true);
  double sum_b = 0.0, sum_inv = 0.0;
  for (double xi : x) {
    sum_b += bias(xi);
    sum_inv += 1.0 / bias(xi);
  }
  const double ratio = sum_inv / sum_b;
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(strict.f[i] == doctest::Approx(ratio * norm.f[i]).epsilon(1e-12));
}

TEST_CASE("unit-weight estimates nearly integrate to one on padded grids")
{
  std::mt19937 gen(77);
  std::normal_distribution<double> nd(4.0, 1.5);
  std::vector<double> x(40), w(40);
  double tw = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = nd(gen);
    w[i] = 0.3 + (gen() % 7) * 0.1;
    tw += w[i];
  }
  for (double& wi : w)
    wi /= tw;
  const WeightedSample s(x, w);
  const double h = 0.5;
  const DensityEstimate d = wkde::wkde_eval(s, h, wkde::default_grid(s, h));
  double mass = 0.0;
  for (std::size_t i = 1; i < d.grid.size(); ++i)
    mass += 0.5 * (d.f[i] + d.f[i - 1]) * (d.grid[i] - d.grid[i - 1]);
  CHECK(mass >= 0.9);
  CHECK(mass <= 1.02);
}

TEST_CASE("estimates ignore input order and stay non-negative")
{
  std::mt19937 gen(43);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> x(25), w(25);
  for (std::size_t i = 0; i < 25; ++i) {
    x[i] = nd(gen);
    w[i] = 0.1 + (i % 5) * 0.2;
  }
  std::vector<double> xr = x, wr = w;
  std::reverse(xr.begin(), xr.end());
  std::reverse(wr.begin(), wr.end());
  const std::vector<double> grid = wkde::linspace(-4.0, 4.0, 101);
  const DensityEstimate a = wkde::wkde_eval(WeightedSample(x, w), 0.5, grid);
  const DensityEstimate b = wkde::wkde_eval(WeightedSample(xr, wr), 0.5, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.f[i] == doctest::Approx(b.f[i]).epsilon(1e-14));
    CHECK(a.f[i] >= 0.0);
  }
}

TEST_CASE("survival curve from a density")
{
  // standard normal density tabulated on a wide grid
  const std::vector<double> grid = wkde::linspace(-8.0, 8.0, 2001);
  DensityEstimate d;
  d.grid = grid;
  d.f.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    d.f[i] = oracle::dnorm(grid[i]);
  const std::vector<double> s = wkde::survival_from_density(d);
  CHECK(s.front() == 1.0);
  std::size_t mid = grid.size() / 2;
  CHECK(s[mid] == doctest::Approx(0.5).epsilon(0.01));
  for (std::size_t i = 1; i < s.size(); ++i)
    CHECK(s[i] <= s[i - 1]);
  CHECK(s.back() == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("grid validation")
{
  const WeightedSample s({ 1.0 }, { 1.0 });
  CHECK_THROWS_AS(wkde::wkde_eval(s, 1.0, { 1.0 }), wkde::Error);
  CHECK_THROWS_AS(wkde::wkde_eval(s, 1.0, { 1.0, 1.0 }), wkde::Error);
  CHECK_THROWS_AS(wkde::wkde_eval(s, 1.0, { 2.0, 1.0 }), wkde::Error);
  const std::vector<double> g = wkde::default_grid(s, 1.0, 64);
  CHECK(g.size() == 64);
  CHECK(g.front() == doctest::Approx(-3.0));
  CHECK(g.back() == doctest::Approx(5.0));
}
