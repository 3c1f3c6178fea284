#pragma once

#include <string>

namespace wkde {

enum class KernelFamily { gaussian, epanechnikov };

//! Kernel family together with the analytic constants the bandwidth
//! selectors need: the second moment k2 = int t^2 K(t) dt and the
//! roughness R(K) = int K(t)^2 dt.
struct KernelSpec {
  KernelFamily family;
  double second_moment; // k2
  double roughness;     // R(K)

  static KernelSpec gaussian();
  static KernelSpec epanechnikov();
  static KernelSpec from_name(const std::string& name);
  std::string name() const;
};

//! K(t). Gaussian evaluation truncates at |t| > 8 and returns 0
//! (tail value < 1e-15).
double kernel_eval(const KernelSpec& k, double t);

//! K_h(u) = K(u/h) / h. Throws NonPositiveBandwidth if h <= 0.
double scaled_kernel(const KernelSpec& k, double h, double u);

//! Convolution of K_h with itself evaluated at u. For the Gaussian this is
//! another Gaussian, K_{sqrt(2) h}(u). Throws UnsupportedKernel for the
//! Epanechnikov family (only the Gaussian is used by LSCV).
double self_convolution_eval(const KernelSpec& k, double h, double u);

//! Integral of K_h(u - x) over u in (-inf, t], i.e. the kernel CDF. Used by
//! tests and survival utilities; Gaussian only.
double gaussian_kernel_cdf(double h, double u);

} // namespace wkde
