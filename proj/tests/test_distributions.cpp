#include "wkde/distributions.hpp"
#include "wkde/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using wkde::Rng;
using wkde::TargetDist;

TEST_CASE("quantile spot values")
{
  const TargetDist w = TargetDist::weibull(2.0, 1.0);
  CHECK(w.quantile(1.0 - std::exp(-1.0)) == doctest::Approx(1.0));
  const TargetDist e = TargetDist::exponential(1.0);
  CHECK(e.quantile(0.5) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("sampling hits the population mean")
{
  const TargetDist d = TargetDist::normal(13.0, 3.0);
  Rng rng(123);
  double mean = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i)
    mean += d.sample(rng);
  mean /= double(n);
  CHECK(mean == doctest::Approx(13.0).epsilon(0.05 / 13.0));
}

TEST_CASE("cdf differentiates to the pdf")
{
  const std::vector<TargetDist> dists = { TargetDist::normal(13.0, 3.0),
                                          TargetDist::exponential(1.0),
                                          TargetDist::weibull(2.0, 1.0) };
  for (const auto& d : dists) {
    for (int i = 1; i < 100; ++i) {
      const double p = double(i) / 100.0;
      const double x = d.quantile(p);
      const double eps = 1e-6 * std::max(1.0, std::fabs(x));
      const double deriv = (d.cdf(x + eps) - d.cdf(x - eps)) / (2.0 * eps);
      CHECK(deriv == doctest::Approx(d.pdf(x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("quantile inverts the cdf")
{
  const std::vector<TargetDist> dists = { TargetDist::normal(13.0, 3.0),
                                          TargetDist::exponential(1.0),
                                          TargetDist::weibull(2.0, 1.0) };
  for (const auto& d : dists) {
    for (int i = 1; i < 50; ++i) {
      const double p = double(i) / 50.0;
      const double x = d.quantile(p);
      CHECK(d.quantile(d.cdf(x)) ==
            doctest::Approx(x).epsilon(1e-9).scale(std::fabs(x) + 1.0));
    }
  }
}

TEST_CASE("densities integrate to one")
{
  const std::vector<TargetDist> dists = { TargetDist::normal(13.0, 3.0),
                                          TargetDist::exponential(1.0),
                                          TargetDist::weibull(2.0, 1.0) };
  for (const auto& d : dists) {
    const double mass = oracle::integrate(
      [&](double x) { return d.pdf(x); }, d.quantile(1e-12),
      d.quantile(1.0 - 1e-12), 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("seed determinism and stream separation")
{
  const TargetDist d = TargetDist::weibull(2.0, 1.0);
  Rng a(99), b(99), c(100);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double xa = d.sample(a);
    all_equal = all_equal && xa == d.sample(b);
    any_diff = any_diff || xa != d.sample(c);
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(Rng::stream_seed(7, 0) != Rng::stream_seed(7, 1));
  CHECK(Rng::stream_seed(7, 0) == Rng::stream_seed(7, 0));
}

TEST_CASE("censoring calibration matches the exponential closed form")
{
  // both exponential: rate 0.3 means the censoring mean is 7/3 of the
  // target's
  const TargetDist t = TargetDist::exponential(1.0);
  const double scale = wkde::calibrate_censoring_scale(
    t, TargetDist::Family::exponential, 0.3);
  CHECK(scale == doctest::Approx(7.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("empirical censoring rate is close to the target")
{
  const TargetDist t = TargetDist::normal(13.0, 3.0);
  Rng rng(2718);
  const std::vector<double> draws = t.sample(10000, rng);
  const wkde::CensoringResult res = wkde::apply_censoring(draws, 0.3, t, rng);
  double frac = 0.0;
  for (int d : res.delta)
    frac += d == 0 ? 1.0 : 0.0;
  frac /= double(res.delta.size());
  CHECK(frac == doctest::Approx(0.30).epsilon(0.02 / 0.30));
}

TEST_CASE("vanishing censoring rate keeps almost every event")
{
  const TargetDist t = TargetDist::weibull(2.0, 1.0);
  Rng rng(5);
  const std::vector<double> draws = t.sample(4000, rng);
  const wkde::CensoringResult res = wkde::apply_censoring(draws, 0.005, t,
                                                          rng);
  double frac = 0.0;
  for (int d : res.delta)
    frac += d == 0 ? 1.0 : 0.0;
  frac /= double(res.delta.size());
  CHECK(frac < 0.02);
}

TEST_CASE("thinning")
{
  Rng rng(31337);
  const std::vector<double> x(10000, 1.0);
  CHECK(wkde::biased_thin(x, [](double) { return 1.0; }, rng).size() ==
        x.size());
  const auto half = wkde::biased_thin(x, [](double) { return 0.5; }, rng);
  CHECK(double(half.size()) / double(x.size()) ==
        doctest::Approx(0.5).epsilon(0.04));
  CHECK_THROWS_AS(wkde::biased_thin(x, [](double) { return 1.5; }, rng),
                  wkde::Error);
}

TEST_CASE("step thinning keeps the quadrature fraction")
{
  const TargetDist t = TargetDist::normal(10.0, 2.0);
  const auto b2 = wkde::biasing_b2(t);
  const double expect = oracle::integrate(
    [&](double x) { return b2(x) * t.pdf(x); }, t.quantile(1e-10),
    t.quantile(1.0 - 1e-10), 1e-10);
  Rng rng(808);
  const std::vector<double> draws = t.sample(20000, rng);
  const auto kept = wkde::biased_thin(draws, b2, rng);
  CHECK(double(kept.size()) / double(draws.size()) ==
        doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("smooth biasing function")
{
  const TargetDist t = TargetDist::normal(10.0, 2.0);
  const auto b1 = wkde::biasing_b1(t);
  CHECK(b1(0.0) == 0.0);
  CHECK(b1(18.0) == 1.0); // mu + 4 sigma
  CHECK(b1(25.0) == 1.0);
  double prev = -1.0;
  for (double x = -5.0; x <= 30.0; x += 0.25) {
    CHECK(b1(x) >= prev);
    prev = b1(x);
  }
}

TEST_CASE("step biasing function")
{
  const TargetDist t = TargetDist::normal(10.0, 2.0);
  const auto b2 = wkde::biasing_b2(t);
  CHECK(b2(10.0) == doctest::Approx(0.6));
  CHECK(b2(10.0 - 4.0) == doctest::Approx(0.2));
  CHECK(b2(10.0 + 4.0) == doctest::Approx(1.0));
}

TEST_CASE("distribution parsing")
{
  CHECK(TargetDist::parse("normal:13,3").name() == "normal:13,3");
  CHECK(TargetDist::parse("exp:1").mean() == doctest::Approx(1.0));
  CHECK(TargetDist::parse("weibull:2,1").sd() ==
        doctest::Approx(std::sqrt(std::tgamma(2.0) -
                                  std::pow(std::tgamma(1.5), 2.0))));
  CHECK_THROWS_AS(TargetDist::parse("cauchy:0,1"), wkde::Error);
}

TEST_CASE("normal quantile accuracy")
{
  for (double p : { 1e-8, 1e-4, 0.025, 0.31, 0.5, 0.77, 0.975, 1.0 - 1e-6 }) {
    const double x = wkde::normal_quantile(p);
    CHECK(0.5 * std::erfc(-x / M_SQRT2) ==
          doctest::Approx(p).epsilon(1e-12));
  }
}
