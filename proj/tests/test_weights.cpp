#include "wkde/errors.hpp"
#include "wkde/sample.hpp"
#include "wkde/weights.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <numeric>
#include <random>

TEST_CASE("uniform weights")
{
  CHECK(wkde::uniform_weights(4) ==
        std::vector<double>{ 0.25, 0.25, 0.25, 0.25 });
  CHECK(wkde::uniform_weights(1) == std::vector<double>{ 1.0 });
  const auto w = wkde::uniform_weights(10);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("product-limit jump weights")
{
  const auto all_events = wkde::km_weights({ 1, 2, 3, 4, 5 },
                                           { 1, 1, 1, 1, 1 });
  for (double wi : all_events)
    CHECK(wi == doctest::Approx(0.2).epsilon(1e-15));

  const auto w1 = wkde::km_weights({ 1, 2, 3 }, { 1, 0, 1 });
  CHECK(w1[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w1[1] == 0.0);
  CHECK(w1[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // the censored largest point keeps the unassigned mass out of the total
  const auto w2 = wkde::km_weights({ 1, 2 }, { 1, 0 });
  CHECK(w2[0] == doctest::Approx(0.5));
  CHECK(w2[1] == 0.0);
  CHECK(std::accumulate(w2.begin(), w2.end(), 0.0) == doctest::Approx(0.5));

  bool all_censored = false;
  const auto w3 = wkde::km_weights({ 1, 2 }, { 0, 0 }, &all_censored);
  CHECK(all_censored);
  CHECK(w3 == std::vector<double>{ 0.0, 0.0 });
}

TEST_CASE("km weights equal the product-limit oracle on random samples")
{
  std::mt19937 gen(2024);
  std::exponential_distribution<double> ed(1.0);
  std::bernoulli_distribution censored(0.35);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + gen() % 60;
    std::vector<double> t(n);
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = ed(gen);
      d[i] = censored(gen) ? 0 : 1;
    }
    const wkde::WeightedSample s = wkde::WeightedSample::uniform(t, d);
    const auto got = wkde::km_weights(s.x(), s.delta());
    const auto want = oracle::product_limit_jumps(s.x(), s.delta());
    for (std::size_t i = 0; i < n; ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));

    const double total = std::accumulate(got.begin(), got.end(), 0.0);
    if (s.delta().back() == 1)
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    else
      CHECK(total < 1.0);
  }
}

TEST_CASE("censoring survival step function")
{
  // no censoring: the branch function stays 1 up to the last observation
  const wkde::CensoringSurvival all1({ 1, 2, 3 }, { 1, 1, 1 });
  CHECK(all1(0.0) == 1.0);
  CHECK(all1.complement(0.5) == 0.0);
  CHECK(all1(3.0) == 1.0);
  CHECK(all1(3.5) == 0.0);
  CHECK(all1.complement(3.5) == 1.0);

  // single censored point at the first position: one factor 1/2
  const wkde::CensoringSurvival cs({ 1, 2 }, { 0, 1 });
  CHECK(cs(1.0) == 1.0);
  CHECK(cs(1.5) == doctest::Approx(0.5));
  CHECK(cs(2.0) == doctest::Approx(0.5));
  CHECK(cs(2.1) == 0.0);
}

TEST_CASE("inverse-bias weights")
{
  const auto constant = wkde::biased_weights({ 1, 2, 3 },
                                             [](double) { return 0.7; });
  for (double wi : constant)
    CHECK(wi == doctest::Approx(1.0 / 3.0));

  const auto prop = wkde::biased_weights({ 1, 2 }, [](double x) { return x; });
  CHECK(prop[0] == doctest::Approx(2.0 / 3.0));
  CHECK(prop[1] == doctest::Approx(1.0 / 3.0));

  const auto tied = wkde::biased_weights({ 1, 1, 2 },
                                         [](double x) { return x; });
  CHECK(tied[0] == doctest::Approx(0.4));
  CHECK(tied[1] == doctest::Approx(0.4));
  CHECK(tied[2] == doctest::Approx(0.2));

  CHECK_THROWS_AS(
    wkde::biased_weights({ 0, 1 }, [](double x) { return x; }), wkde::Error);
}

TEST_CASE("windowed redistribution")
{
  const auto none = wkde::redistribute_windowed({ 1, 2, 3 }, { 1, 1, 1 }, {});
  for (double wi : none)
    CHECK(wi == doctest::Approx(1.0 / 3.0));

  const auto w = wkde::redistribute_windowed({ 1, 2, 3 }, { 0, 1, 1 },
                                             { 1.5 });
  CHECK(w[0] == 0.0);
  CHECK(w[1] == doctest::Approx(2.0 / 3.0));
  CHECK(w[2] == doctest::Approx(1.0 / 3.0));

  // empty window falls back to the nearest observation
  const auto fb = wkde::redistribute_windowed({ 1, 5 }, { 0, 1 }, { 1.0 });
  CHECK(fb[0] == 0.0);
  CHECK(fb[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(wkde::redistribute_windowed({ 1 }, { 0 }, { 1.0 }),
                  wkde::Error);
}

TEST_CASE("windowed redistribution cascades through censored recipients")
{
  // censored point 2 receives from censored point 1 and passes it on
  const auto w = wkde::redistribute_windowed({ 1, 2, 3 }, { 0, 0, 1 },
                                             { 1.5, 2.0 });
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 0.0);
  CHECK(w[2] == doctest::Approx(1.0));
}

TEST_CASE("infinite windows reproduce the product-limit weights")
{
  std::mt19937 gen(5150);
  std::weibull_distribution<double> wd(2.0, 1.0);
  std::bernoulli_distribution censored(0.3);
  const double inf = std::numeric_limits<double>::infinity();
  int done = 0;
  while (done < 50) {
    const std::size_t n = 3 + gen() % 40;
    std::vector<double> t(n);
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = wd(gen);
      d[i] = censored(gen) ? 0 : 1;
    }
    const wkde::WeightedSample s = wkde::WeightedSample::uniform(t, d);
    if (s.delta().back() != 1)
      continue; // limit identity needs an uncensored maximum
    ++done;
    std::vector<double> r(s.size() - s.event_count(), inf);
    const auto redist = wkde::redistribute_windowed(s.x(), s.delta(), r);
    const auto km = wkde::km_weights(s.x(), s.delta());
    for (std::size_t i = 0; i < n; ++i)
      CHECK(redist[i] == doctest::Approx(km[i]).epsilon(1e-12));
  }
}

TEST_CASE("windowed redistribution conserves mass")
{
  std::mt19937 gen(77);
  std::exponential_distribution<double> ed(0.5);
  std::bernoulli_distribution censored(0.4);
  std::uniform_real_distribution<double> rr(0.0, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 3 + gen() % 30;
    std::vector<double> t(n);
    std::vector<int> d(n);
    bool any_event = false;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = ed(gen);
      d[i] = censored(gen) ? 0 : 1;
      any_event = any_event || d[i] == 1;
    }
    if (!any_event)
      d[gen() % n] = 1;
    const wkde::WeightedSample s = wkde::WeightedSample::uniform(t, d);
    std::vector<double> r(s.size() - s.event_count());
    for (double& ri : r)
      ri = rr(gen);
    const auto w = wkde::redistribute_windowed(s.x(), s.delta(), r);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
      if (s.delta()[i] == 0)
        CHECK(w[i] == 0.0);
  }
}
