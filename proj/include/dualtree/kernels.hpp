#pragma once

#include <string>

namespace dualtree {

// Shift-invariant kernel, monotonically decreasing and nonnegative,
// concave on [0, h] and convex beyond. The bandwidth is sigma for the
// gaussian and exponential families and the support radius b for the
// epanechnikov family (K(d) = 1 - (d/b)^2 on [0, b], 0 beyond).
struct Kernel {
  enum class Family { gaussian, exponential, epanechnikov };
  Family family = Family::gaussian;
  double bandwidth = 1.0;

  // Spec strings: gaussian:sigma=1.0 | exponential:sigma=0.5 | epanechnikov:b=2
  static Kernel parse(const std::string& text);
  std::string to_string() const;
};

struct KernelPoint {
  double value = 0.0;
  double derivative = 0.0;
  double h = 0.0;  // inflection bandwidth of the kernel
};

/// K(d), K'(d) and h. Errors on d < 0.
KernelPoint kernel_eval(const Kernel& k, double d);

inline double kernel_value(const Kernel& k, double d) {
  return kernel_eval(k, d).value;
}

/// d with K(d) = v, for v in (0, K(0)].
double kernel_inverse(const Kernel& k, double v);

/// zeta = -K'(h) * K^{-1}(epsilon) / epsilon, for epsilon in (0, 1).
/// Evaluated from the kernel pieces, not a per-family closed form, so
/// bandwidth invariance is observable rather than baked in.
double zeta(const Kernel& k, double epsilon);

struct KdeBoundExponents {
  double theorem_exponent = 0.0;      // 8 + ceil(log2 zeta)
  double illustrative_exponent = 0.0; // 4 + log2 zeta
};

/// Both exponent forms for the density-estimation runtime bound. The two
/// disagree by construction; reports carry both.
KdeBoundExponents kde_bound_exponents(const Kernel& k, double epsilon);

}  // namespace dualtree
