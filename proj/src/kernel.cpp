#include "wkde/kernel.hpp"

#include "wkde/errors.hpp"

#include <cmath>

namespace wkde {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kGaussCut = 8.0;
} // namespace

KernelSpec KernelSpec::gaussian()
{
  return { KernelFamily::gaussian, 1.0, 1.0 / (2.0 * std::sqrt(M_PI)) };
}

KernelSpec KernelSpec::epanechnikov()
{
  return { KernelFamily::epanechnikov, 0.2, 0.6 };
}

KernelSpec KernelSpec::from_name(const std::string& name)
{
  if (name == "gaussian")
    return gaussian();
  if (name == "epanechnikov")
    return epanechnikov();
  throw Error("UnsupportedKernel", "unknown kernel family '" + name + "'");
}

std::string KernelSpec::name() const
{
  return family == KernelFamily::gaussian ? "gaussian" : "epanechnikov";
}

double kernel_eval(const KernelSpec& k, double t)
{
  switch (k.family) {
  case KernelFamily::gaussian:
    if (std::fabs(t) > kGaussCut)
      return 0.0;
    return std::exp(-0.5 * t * t) / kSqrt2Pi;
  case KernelFamily::epanechnikov:
    if (std::fabs(t) > 1.0)
      return 0.0;
    return 0.75 * (1.0 - t * t);
  }
  return 0.0;
}

double scaled_kernel(const KernelSpec& k, double h, double u)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  return kernel_eval(k, u / h) / h;
}

double self_convolution_eval(const KernelSpec& k, double h, double u)
{
  if (k.family != KernelFamily::gaussian)
    throw Error("UnsupportedKernel",
                "kernel self-convolution is only available for the Gaussian");
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  return scaled_kernel(k, M_SQRT2 * h, u);
}

double gaussian_kernel_cdf(double h, double u)
{
  if (!(h > 0.0))
    throw Error("NonPositiveBandwidth", "h must be positive");
  return 0.5 * std::erfc(-u / (h * M_SQRT2));
}

} // namespace wkde
