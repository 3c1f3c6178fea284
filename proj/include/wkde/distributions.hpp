#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace wkde {

//! Deterministic random source. Uniforms come from mt19937_64 (sequence
//! fixed by the C++ standard) mapped to [0, 1) via the top 53 bits; normals
//! use the basic Box-Muller transform, consuming two uniforms per draw.
//! Independent replicate streams are derived with the splitmix64 finalizer.
class Rng {
public:
  explicit Rng(std::uint64_t seed)
    : gen_(seed)
  {
  }

  //! Uniform on [0, 1).
  double uniform()
  {
    return double(gen_() >> 11) * 0x1.0p-53;
  }

  //! Standard normal via z = sqrt(-2 ln u1) cos(2 pi u2) with u1 in (0, 1].
  double normal()
  {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  //! Stream seed for replicate `stream`: splitmix64 finalizer applied to
  //! master + (stream + 1) * golden-ratio increment.
  static std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream)
  {
    std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 gen_;
};

//! Target population: Normal(mu, sigma), Exponential (mean parametrization)
//! or Weibull(shape, scale), with evaluable pdf/cdf/quantile and sampling by
//! inverse CDF (Box-Muller for the normal).
class TargetDist {
public:
  enum class Family { normal, exponential, weibull };

  static TargetDist normal(double mu, double sigma);
  static TargetDist exponential(double mean);
  static TargetDist weibull(double shape, double scale);

  //! Parses "normal:13,3", "exp:1" or "weibull:2,1".
  static TargetDist parse(const std::string& text);

  Family family() const { return family_; }
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  double mean() const;
  double sd() const;
  std::string name() const;

  double sample(Rng& rng) const;
  std::vector<double> sample(std::size_t n, Rng& rng) const;

  //! Same family with the scale replaced (sigma / mean / scale).
  TargetDist with_scale(double scale) const;

private:
  TargetDist(Family f, double a, double b)
    : family_(f)
    , a_(a)
    , b_(b)
  {
  }

  Family family_;
  double a_; // mu | mean | shape
  double b_; // sigma | unused | scale
};

//! Standard normal quantile (rational approximation refined by Halley steps
//! on erfc; |error| at double precision).
double normal_quantile(double p);

struct CensoringResult {
  std::vector<double> x;
  std::vector<int> delta;
  double scale = 0.0; // calibrated censoring scale
};

//! Scale for `cens_family` such that P(C < T) equals target_rate when T
//! follows `target`, found by bisection against quadrature of
//! int F_C(t) f_T(t) dt. Throws CalibrationFailed when no bracket exists.
double calibrate_censoring_scale(const TargetDist& target,
                                 TargetDist::Family cens_family,
                                 double target_rate);

//! Right-censor the times t: draw C_i from the calibrated censoring
//! distribution, return x_i = min(t_i, c_i) and delta_i = 1{t_i <= c_i}.
CensoringResult apply_censoring(const std::vector<double>& t,
                                double target_rate, const TargetDist& target,
                                Rng& rng,
                                TargetDist::Family cens_family =
                                  TargetDist::Family::exponential);

//! Censor against a fully specified censoring distribution (no calibration;
//! used by the simulation harness, which calibrates once per scenario).
CensoringResult censor_with(const std::vector<double>& t,
                            const TargetDist& cens, Rng& rng);

//! Censoring distribution of the given family around the target, with the
//! stated scale.
TargetDist censoring_dist(const TargetDist& target,
                          TargetDist::Family cens_family, double scale);

//! Keep each observation independently with probability b(x).
std::vector<double> biased_thin(const std::vector<double>& x,
                                const std::function<double(double)>& b,
                                Rng& rng);

//! Smooth biasing proportional to x, realized as clamp(x/(mu+4 sigma), 0, 1)
//! so it is a valid keep-probability on essentially all draws.
std::function<double(double)> biasing_b1(const TargetDist& dist);

//! Five-level step biasing 0.2/0.4/0.6/0.8/1.0 with breaks at
//! mu -1.2 sigma, mu -0.4 sigma, mu +0.4 sigma, mu +1.2 sigma.
std::function<double(double)> biasing_b2(const TargetDist& dist);

} // namespace wkde
