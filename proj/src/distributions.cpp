#include "wkde/distributions.hpp"

#include "wkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wkde {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
} // namespace

TargetDist TargetDist::normal(double mu, double sigma)
{
  if (!(sigma > 0.0))
    throw Error("InvalidParameter", "sigma must be positive");
  return TargetDist(Family::normal, mu, sigma);
}

TargetDist TargetDist::exponential(double mean)
{
  if (!(mean > 0.0))
    throw Error("InvalidParameter", "mean must be positive");
  return TargetDist(Family::exponential, mean, 0.0);
}

TargetDist TargetDist::weibull(double shape, double scale)
{
  if (!(shape > 0.0) || !(scale > 0.0))
    throw Error("InvalidParameter", "shape and scale must be positive");
  return TargetDist(Family::weibull, shape, scale);
}

TargetDist TargetDist::parse(const std::string& text)
{
  const auto colon = text.find(':');
  const std::string fam = text.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ','))
      args.push_back(std::stod(tok));
  }
  if (fam == "normal" && args.size() == 2)
    return normal(args[0], args[1]);
  if ((fam == "exp" || fam == "exponential") && args.size() == 1)
    return exponential(args[0]);
  if (fam == "weibull" && args.size() == 2)
    return weibull(args[0], args[1]);
  throw Error("InvalidParameter", "cannot parse distribution '" + text + "'");
}

double TargetDist::pdf(double x) const
{
  switch (family_) {
  case Family::normal: {
    const double z = (x - a_) / b_;
    return std::exp(-0.5 * z * z) / (b_ * kSqrt2Pi);
  }
  case Family::exponential:
    return x < 0.0 ? 0.0 : std::exp(-x / a_) / a_;
  case Family::weibull: {
    if (x < 0.0)
      return 0.0;
    if (x == 0.0)
      return a_ > 1.0 ? 0.0 : (a_ == 1.0 ? 1.0 / b_ : HUGE_VAL);
    const double z = x / b_;
    return (a_ / b_) * std::pow(z, a_ - 1.0) * std::exp(-std::pow(z, a_));
  }
  }
  return 0.0;
}

double TargetDist::cdf(double x) const
{
  switch (family_) {
  case Family::normal:
    return 0.5 * std::erfc(-(x - a_) / (b_ * M_SQRT2));
  case Family::exponential:
    return x < 0.0 ? 0.0 : -std::expm1(-x / a_);
  case Family::weibull:
    return x < 0.0 ? 0.0 : -std::expm1(-std::pow(x / b_, a_));
  }
  return 0.0;
}

double TargetDist::quantile(double p) const
{
  if (!(p > 0.0 && p < 1.0))
    throw Error("InvalidProbability", "p must lie in (0, 1)");
  switch (family_) {
  case Family::normal:
    return a_ + b_ * normal_quantile(p);
  case Family::exponential:
    return -a_ * std::log1p(-p);
  case Family::weibull:
    return b_ * std::pow(-std::log1p(-p), 1.0 / a_);
  }
  return 0.0;
}

double TargetDist::mean() const
{
  switch (family_) {
  case Family::normal:
    return a_;
  case Family::exponential:
    return a_;
  case Family::weibull:
    return b_ * std::tgamma(1.0 + 1.0 / a_);
  }
  return 0.0;
}

double TargetDist::sd() const
{
  switch (family_) {
  case Family::normal:
    return b_;
  case Family::exponential:
    return a_;
  case Family::weibull: {
    const double m1 = std::tgamma(1.0 + 1.0 / a_);
    const double m2 = std::tgamma(1.0 + 2.0 / a_);
    return b_ * std::sqrt(m2 - m1 * m1);
  }
  }
  return 0.0;
}

std::string TargetDist::name() const
{
  std::ostringstream os;
  switch (family_) {
  case Family::normal:
    os << "normal:" << a_ << "," << b_;
    break;
  case Family::exponential:
    os << "exp:" << a_;
    break;
  case Family::weibull:
    os << "weibull:" << a_ << "," << b_;
    break;
  }
  return os.str();
}

double TargetDist::sample(Rng& rng) const
{
  switch (family_) {
  case Family::normal:
    return a_ + b_ * rng.normal();
  case Family::exponential:
    return -a_ * std::log1p(-rng.uniform());
  case Family::weibull:
    return b_ * std::pow(-std::log1p(-rng.uniform()), 1.0 / a_);
  }
  return 0.0;
}

std::vector<double> TargetDist::sample(std::size_t n, Rng& rng) const
{
  std::vector<double> x(n);
  for (double& xi : x)
    xi = sample(rng);
  return x;
}

TargetDist TargetDist::with_scale(double scale) const
{
  switch (family_) {
  case Family::normal:
    return normal(a_, scale);
  case Family::exponential:
    return exponential(scale);
  case Family::weibull:
    return weibull(a_, scale);
  }
  return *this;
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw Error("InvalidProbability", "p must lie in (0, 1)");

  // Acklam's rational approximation
  static const double a[] = { -3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00 };
  static const double b[] = { -5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01 };
  static const double c[] = { -7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00 };
  static const double d[] = { 7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00 };
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // two Halley refinements against erfc bring the result to double precision
  for (int it = 0; it < 2; ++it) {
    const double e = 0.5 * std::erfc(-x / M_SQRT2) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double calibrate_censoring_scale(const TargetDist& target,
                                 TargetDist::Family cens_family,
                                 double target_rate)
{
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw Error("InvalidProbability", "target rate must lie in (0, 1)");

  // censoring prototypes with unit scale; only the scale is searched
  const auto proto = [&](double scale) {
    switch (cens_family) {
    case TargetDist::Family::normal:
      return TargetDist::normal(target.mean(), scale);
    case TargetDist::Family::exponential:
      return TargetDist::exponential(scale);
    case TargetDist::Family::weibull:
      return TargetDist::weibull(2.0, scale);
    }
    return TargetDist::exponential(scale);
  };

  // P(C < T) by composite Simpson over the target's effective support
  const double lo = target.quantile(1e-10);
  const double hi = target.quantile(1.0 - 1e-10);
  const std::size_t segments = 2000;
  const double step = (hi - lo) / double(segments);
  const auto rate_for = [&](double scale) {
    const TargetDist cens = proto(scale);
    double acc = 0.0;
    for (std::size_t k = 0; k < segments; ++k) {
      const double x0 = lo + double(k) * step;
      const double x1 = x0 + step;
      const double xm = 0.5 * (x0 + x1);
      const auto f = [&](double t) { return cens.cdf(t) * target.pdf(t); };
      acc += (step / 6.0) * (f(x0) + 4.0 * f(xm) + f(x1));
    }
    return acc;
  };

  // rate decreases in the censoring scale; expand a bracket then bisect
  double s_lo = target.sd() > 0 ? target.sd() * 1e-3 : 1e-3;
  double s_hi = std::max(target.mean() + 6.0 * target.sd(), 1.0);
  int guard = 0;
  while (rate_for(s_lo) < target_rate) {
    s_lo *= 0.5;
    if (++guard > 200)
      throw Error("CalibrationFailed", "cannot bracket the censoring rate "
                                       "from below");
  }
  guard = 0;
  while (rate_for(s_hi) > target_rate) {
    s_hi *= 2.0;
    if (++guard > 200)
      throw Error("CalibrationFailed", "cannot bracket the censoring rate "
                                       "from above");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (rate_for(mid) > target_rate)
      s_lo = mid;
    else
      s_hi = mid;
  }
  return 0.5 * (s_lo + s_hi);
}

CensoringResult censor_with(const std::vector<double>& t,
                            const TargetDist& cens, Rng& rng)
{
  CensoringResult out;
  out.x.resize(t.size());
  out.delta.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double c = cens.sample(rng);
    out.x[i] = std::min(t[i], c);
    out.delta[i] = t[i] <= c ? 1 : 0;
  }
  return out;
}

TargetDist censoring_dist(const TargetDist& target,
                          TargetDist::Family cens_family, double scale)
{
  switch (cens_family) {
  case TargetDist::Family::normal:
    return TargetDist::normal(target.mean(), scale);
  case TargetDist::Family::exponential:
    return TargetDist::exponential(scale);
  case TargetDist::Family::weibull:
    return TargetDist::weibull(2.0, scale);
  }
  return TargetDist::exponential(scale);
}

CensoringResult apply_censoring(const std::vector<double>& t,
                                double target_rate, const TargetDist& target,
                                Rng& rng, TargetDist::Family cens_family)
{
  const double scale = calibrate_censoring_scale(target, cens_family,
                                                 target_rate);
  CensoringResult out =
    censor_with(t, censoring_dist(target, cens_family, scale), rng);
  out.scale = scale;
  return out;
}

std::vector<double> biased_thin(const std::vector<double>& x,
                                const std::function<double(double)>& b,
                                Rng& rng)
{
  std::vector<double> kept;
  kept.reserve(x.size());
  for (double xi : x) {
    const double p = b(xi);
    if (!(p >= 0.0 && p <= 1.0))
      throw Error("BiasOutOfRange", "thinning probabilities must lie in "
                                    "[0, 1]");
    if (rng.uniform() < p)
      kept.push_back(xi);
  }
  return kept;
}

std::function<double(double)> biasing_b1(const TargetDist& dist)
{
  const double ceiling = dist.mean() + 4.0 * dist.sd();
  return [ceiling](double x) { return std::clamp(x / ceiling, 0.0, 1.0); };
}

std::function<double(double)> biasing_b2(const TargetDist& dist)
{
  const double mu = dist.mean();
  const double sigma = dist.sd();
  return [mu, sigma](double x) {
    if (x <= mu - 1.2 * sigma)
      return 0.2;
    if (x <= mu - 0.4 * sigma)
      return 0.4;
    if (x <= mu + 0.4 * sigma)
      return 0.6;
    if (x <= mu + 1.2 * sigma)
      return 0.8;
    return 1.0;
  };
}

} // namespace wkde
