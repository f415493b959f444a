#include "dualtree/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace dualtree {

Kernel Kernel::parse(const std::string& text) {
  const size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  Kernel k;
  std::string param_key = "sigma";
  if (name == "gaussian") {
    k.family = Family::gaussian;
  } else if (name == "exponential") {
    k.family = Family::exponential;
  } else if (name == "epanechnikov") {
    k.family = Family::epanechnikov;
    param_key = "b";
  } else {
    throw std::invalid_argument("kernel spec: unknown family '" + name + "'");
  }
  if (colon != std::string::npos) {
    const std::string params = text.substr(colon + 1);
    const size_t eq = params.find('=');
    if (eq == std::string::npos || params.substr(0, eq) != param_key)
      throw std::invalid_argument("kernel spec: expected '" + name + ":" +
                                  param_key + "=<value>'");
    k.bandwidth = std::stod(params.substr(eq + 1));
  }
  if (!(k.bandwidth > 0.0))
    throw std::invalid_argument("kernel spec: bandwidth must be positive");
  return k;
}

std::string Kernel::to_string() const {
  switch (family) {
    case Family::gaussian: return "gaussian:sigma=" + std::to_string(bandwidth);
    case Family::exponential:
      return "exponential:sigma=" + std::to_string(bandwidth);
    case Family::epanechnikov: return "epanechnikov:b=" + std::to_string(bandwidth);
  }
  return {};
}

KernelPoint kernel_eval(const Kernel& k, double d) {
  if (d < 0.0) throw std::invalid_argument("kernel_eval: negative distance");
  KernelPoint out;
  const double bw = k.bandwidth;
  switch (k.family) {
    case Kernel::Family::gaussian:
      out.value = std::exp(-d * d / (2.0 * bw * bw));
      out.derivative = -(d / (bw * bw)) * out.value;
      out.h = bw;
      break;
    case Kernel::Family::exponential:
      out.value = std::exp(-d / bw);
      out.derivative = -out.value / bw;
      out.h = 0.0;  // convex everywhere
      break;
    case Kernel::Family::epanechnikov:
      if (d <= bw) {
        out.value = 1.0 - (d / bw) * (d / bw);
        out.derivative = -2.0 * d / (bw * bw);
      } else {
        out.value = 0.0;
        out.derivative = 0.0;
      }
      out.h = bw;
      break;
  }
  return out;
}

double kernel_inverse(const Kernel& k, double v) {
  if (!(v > 0.0) || v > 1.0)
    throw std::invalid_argument("kernel_inverse: value outside (0, K(0)]");
  const double bw = k.bandwidth;
  switch (k.family) {
    case Kernel::Family::gaussian:
      return bw * std::sqrt(2.0 * std::log(1.0 / v));
    case Kernel::Family::exponential:
      return -bw * std::log(v);
    case Kernel::Family::epanechnikov:
      return bw * std::sqrt(1.0 - v);
  }
  throw std::logic_error("kernel_inverse: unreachable");
}

double zeta(const Kernel& k, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("zeta: epsilon must lie in (0, 1)");
  const double h = kernel_eval(k, 0.0).h;
  const double deriv_at_h = kernel_eval(k, h).derivative;
  return -deriv_at_h * kernel_inverse(k, epsilon) / epsilon;
}

KdeBoundExponents kde_bound_exponents(const Kernel& k, double epsilon) {
  const double z = zeta(k, epsilon);
  KdeBoundExponents out;
  out.theorem_exponent = 8.0 + std::ceil(std::log2(z));
  out.illustrative_exponent = 4.0 + std::log2(z);
  return out;
}

}  // namespace dualtree
