#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace loosecore {

/// log C(n, k) for real n >= k >= 0, via lgamma.
inline double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// C(n, k) as a double; may overflow to inf for large arguments.
inline double binomial_real(double n, double k) {
  if (k < 0.0 || k > n) return 0.0;
  return std::exp(log_binomial(n, k));
}

/// Exact C(n, k) in 64-bit arithmetic, or 0 on overflow.
inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t factor = n - k + i;
    // result * factor / i is always integral at this point
    std::uint64_t g = result / i;
    std::uint64_t rem = result % i;
    if (g > (~std::uint64_t{0}) / factor) return 0;
    std::uint64_t part = g * factor;
    std::uint64_t extra = rem * factor / i;
    if (part > (~std::uint64_t{0}) - extra) return 0;
    result = part + extra;
  }
  return result;
}

/// Poisson pmf; lambda = 0 is a point mass at 0.
inline double poisson_pmf(double lambda, unsigned j) {
  if (lambda == 0.0) return j == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + j * std::log(lambda) - std::lgamma(j + 1.0));
}

/// Binomial pmf for small n.
inline double binomial_pmf(unsigned n, double p, unsigned j) {
  if (j > n) return 0.0;
  if (p <= 0.0) return j == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return j == n ? 1.0 : 0.0;
  const double lp = log_binomial(n, j) + j * std::log(p) +
                    (n - j) * std::log1p(-p);
  return std::exp(lp);
}

}  // namespace loosecore
